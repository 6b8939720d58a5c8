"""Start-time penalty of a user: extra slot time beyond the full-power minimum.

A user that cannot yet afford the power cap transmits longer than its
cap-power minimum; the surplus is its penalty.  The penalty never
increases with the start time (waiting only adds harvested energy) and
hits zero at the first start where a full-power slot fits the budget.
Every scheduler in this package minimizes, exactly or greedily, the sum
of these penalties: for a fixed user set the total schedule length is
the (constant) sum of minimum slot times plus the sum of penalties.
"""

import math
from dataclasses import dataclass

from .model import SystemParams, UserProfile
from .power import InfeasibleUser, slot_coeffs, solve_slot

ZERO_PENALTY_TOL = 1e-12   # seconds; shared "penalty is zero" threshold


class NeverAffordable(Exception):
    """The user can never pay for a full-power slot (no harvest income)."""

    def __init__(self, user_id):
        self.user_id = user_id
        super().__init__(f"user {user_id} never affords the power cap")


@dataclass(frozen=True)
class PenaltyPoint:
    """One sampled point of a user's penalty curve."""

    start_time_s: float
    end_time_s: float
    penalty_s: float
    t_min_s: float


def end_time(user: UserProfile, sys: SystemParams, start_s: float) -> float:
    """Completion time of a slot opened at ``start_s``; non-decreasing in it."""
    if start_s < 0.0:
        raise ValueError(f"start_s must be >= 0, got {start_s}")
    c, k, a, t_min, p_max = slot_coeffs(user, sys)
    try:
        _, tau = solve_slot(user.battery_j + c * start_s, c, k, a, t_min, p_max)
    except InfeasibleUser:
        raise InfeasibleUser(user.id) from None
    return start_s + tau


def penalty(user: UserProfile, sys: SystemParams, start_s: float) -> float:
    """Slot time in excess of the full-power minimum when starting at ``start_s``."""
    if start_s < 0.0:
        raise ValueError(f"start_s must be >= 0, got {start_s}")
    c, k, a, t_min, p_max = slot_coeffs(user, sys)
    try:
        _, tau = solve_slot(user.battery_j + c * start_s, c, k, a, t_min, p_max)
    except InfeasibleUser:
        raise InfeasibleUser(user.id) from None
    return tau - t_min


def penalty_point(user: UserProfile, sys: SystemParams, start_s: float) -> PenaltyPoint:
    """Penalty curve sample bundling start, end, penalty and the minimum time."""
    c, k, a, t_min, p_max = slot_coeffs(user, sys)
    try:
        _, tau = solve_slot(user.battery_j + c * start_s, c, k, a, t_min, p_max)
    except InfeasibleUser:
        raise InfeasibleUser(user.id) from None
    return PenaltyPoint(start_s, start_s + tau, tau - t_min, t_min)


def zero_penalty_start(user: UserProfile, sys: SystemParams) -> float:
    """Earliest start at which the user transmits a full-power slot.

    Closed form from the affordability boundary: the stored energy at the
    start plus in-slot harvest must cover a cap-power slot, so the wait
    ends once ``battery + c*s + c*t_min = p_max*t_min``.  Raises
    :class:`NeverAffordable` when there is no harvest income and the
    battery alone falls short.
    """
    c, k, a, t_min, p_max = slot_coeffs(user, sys)
    deficit = (p_max - c) * t_min - user.battery_j
    if deficit <= 0.0:
        return 0.0
    if c <= 0.0:
        raise NeverAffordable(user.id)
    return deficit / c
