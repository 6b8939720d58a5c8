"""Per-slot power control and fixed-order schedule evaluation.

For one user starting its slot with stored energy ``eps`` and harvesting
at rate ``c``, the optimal slot either runs at the power cap (when the
cap is affordable there) or at the unique power that drains exactly the
stored energy plus what arrives during the slot.  The binding power has
a closed form through the lower real branch of the Lambert W function;
an independent bisection solver over the slot duration is provided as a
cross-check oracle.
"""

import math
from dataclasses import dataclass

from .lambertw import Branch, DomainError, lambert_w
from .model import LN2, SystemParams, UserProfile, harvest_rate, sinr_gain

RESIDUAL_RTOL = 1e-9   # binding-equality acceptance for closed-form candidates
_TAU_HI_BOUND = 1e9    # seconds; bisection gives up beyond this slot length


class InfeasibleUser(Exception):
    """User can never transmit: no stored energy and no harvest income."""

    def __init__(self, user_id=None, position=None):
        self.user_id = user_id
        self.position = position
        where = f"user {user_id}" if user_id is not None else "user"
        if position is not None:
            where += f" at slot {position}"
        super().__init__(f"{where} has no energy and harvests nothing")


class NumericalError(ArithmeticError):
    """No Lambert branch produced a residual-valid positive allocation."""


@dataclass(frozen=True)
class StartState:
    """Slot start time and the energy available there."""

    start_time_s: float
    energy_avail_j: float

    def __post_init__(self):
        if self.start_time_s < 0.0:
            raise ValueError(f"start_time_s must be >= 0, got {self.start_time_s}")
        if self.energy_avail_j < 0.0:
            raise ValueError(f"energy_avail_j must be >= 0, got {self.energy_avail_j}")


def start_state(user: UserProfile, sys: SystemParams, start_s: float) -> StartState:
    """Energy available to ``user`` when its slot opens at ``start_s``.

    Harvesting runs from the frame start, so the budget is the initial
    battery plus the harvest rate integrated over the wait.
    """
    return StartState(start_s, user.battery_j + harvest_rate(user, sys) * start_s)


@dataclass(frozen=True)
class Allocation:
    """One scheduled slot: who, when, how long, at what power."""

    user_id: int
    start_time_s: float
    duration_s: float
    power_w: float
    energy_used_j: float


@dataclass
class Schedule:
    """Ordered slot allocations with bookkeeping for the schedulers."""

    order: list[int]
    allocations: list[Allocation]
    penalties_s: list[float]
    total_length_s: float
    algorithm_tag: str
    node_count: int | None = None


# ---------------------------------------------------------------------------
# scalar solvers (hot path: plain floats, math module only)

def _binding_power(eps: float, c: float, k: float, a: float) -> float:
    """Power at which the slot drains exactly eps plus in-slot harvest.

    ``a`` is the demand expressed in nat-seconds, demand_bits*ln2/bandwidth.
    The candidate from the lower Lambert branch is validated by
    substituting back into the binding equalities; the principal branch
    is a fallback for conditioning corners.  Raises NumericalError when
    neither branch yields a consistent positive power.
    """
    if eps == 0.0:
        # no stored energy: the slot runs off harvest income alone
        return c
    u = a / (k * eps)
    v = c * a / eps
    candidates = []
    if u + v < 745.0:   # beyond this exp underflows and only the r-route works
        y = -u * math.exp(-(u + v))
        for branch in (Branch.LOWER, Branch.PRINCIPAL):
            try:
                w = lambert_w(y, branch)
            except DomainError:
                continue
            candidates.append(-1.0 / k - (eps / a) * w)
    # Reparametrized fallback for the harvest-dominated regime, where the
    # two terms above cancel: with r the deviation of W from its
    # asymptote, r + log1p((v - r)/u) = 0 and p = c - (eps/a)*r, which is
    # cancellation-free because u*(eps/a) = 1/k and v*(eps/a) = c exactly.
    candidates.append(c - (eps / a) * _asymptote_gap(u, v))
    for p in candidates:
        if not (p > 0.0 and math.isfinite(p)):
            continue
        tau = a / math.log1p(k * p)
        if not (math.isfinite(tau) and tau > 0.0):
            continue
        used = p * tau
        avail = eps + c * tau
        if abs(used - avail) <= RESIDUAL_RTOL * max(used, avail):
            return p
    raise NumericalError(
        f"no Lambert candidate satisfies the binding equalities "
        f"(eps={eps!r}, c={c!r}, k={k!r}, a={a!r})"
    )


def _asymptote_gap(u: float, v: float) -> float:
    # Newton on h(r) = r + log1p((v - r)/u); h'(r) = (u + v - r - 1)/(u + v - r).
    # The physical root sits where u + v - r > 1; bail out toward the
    # branch point, where the direct Lambert evaluation is the right tool.
    r = -math.log1p(v / u)
    for _ in range(50):
        den = u + v - r
        if den <= 1.0 + 1e-12:
            break
        step = (r + math.log1p((v - r) / u)) * den / (den - 1.0)
        r -= step
        if abs(step) <= 1e-15 * max(abs(r), 1e-300):
            break
    return r


def solve_slot(eps: float, c: float, k: float, a: float,
               t_min: float, p_max: float) -> tuple[float, float]:
    """Capped optimal (power, duration) for one slot.

    The cap is affordable exactly when a full-power slot fits the energy
    budget; that test is algebraically equivalent to the closed-form
    power reaching the cap, and avoids the Lambert evaluation entirely in
    the capped case.
    """
    if eps <= 0.0 and c <= 0.0:
        raise InfeasibleUser()
    if eps + c * t_min >= p_max * t_min:
        return p_max, t_min
    p = _binding_power(eps, c, k, a)
    if p >= p_max:   # only reachable through rounding at the affordability edge
        return p_max, t_min
    return p, a / math.log1p(k * p)


def solve_slot_uncapped(eps: float, c: float, k: float, a: float) -> tuple[float, float]:
    """Binding (power, duration) with the power cap disabled."""
    if eps <= 0.0 and c <= 0.0:
        raise InfeasibleUser()
    p = _binding_power(eps, c, k, a)
    return p, a / math.log1p(k * p)


def bisect_slot(eps: float, c: float, k: float, a: float,
                t_min: float, p_max: float) -> tuple[float, float]:
    """Bisection cross-check for :func:`solve_slot`.

    Solves the same binding system by bracketing the slot duration where
    available energy minus required energy changes sign, then bisecting
    to relative machine precision.  Capped identically to the closed
    form.  The required transmit energy for a fixed demand decreases with
    the slot duration, so the margin function is increasing and the root
    unique.
    """
    if eps <= 0.0 and c <= 0.0:
        raise InfeasibleUser()
    if eps + c * t_min >= p_max * t_min:
        return p_max, t_min

    def margin(tau: float) -> float:
        return eps + c * tau - tau * math.expm1(a / tau) / k

    lo = t_min
    hi = 2.0 * t_min
    while margin(hi) < 0.0:
        hi *= 2.0
        if hi > _TAU_HI_BOUND:
            raise NumericalError(
                f"no binding slot below {_TAU_HI_BOUND:g} s (eps={eps!r}, c={c!r})"
            )
    while hi - lo > 1e-15 * hi:
        mid = 0.5 * (lo + hi)
        if margin(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    tau = 0.5 * (lo + hi)
    return eps / tau + c, tau


# ---------------------------------------------------------------------------
# public per-user wrappers

def slot_coeffs(user: UserProfile, sys: SystemParams) -> tuple[float, float, float, float, float]:
    """Per-user constants (c, k, a, t_min, p_max) used by the solvers."""
    c = harvest_rate(user, sys)
    k = sinr_gain(user, sys)
    a = user.demand_bits * LN2 / sys.bandwidth_hz
    t_min = a / math.log1p(k * sys.p_max_w)
    return c, k, a, t_min, sys.p_max_w


def optimal_power(user: UserProfile, sys: SystemParams,
                  state: StartState) -> tuple[float, float]:
    """Optimal capped (power_w, duration_s) for a slot opening at ``state``."""
    c, k, a, t_min, p_max = slot_coeffs(user, sys)
    try:
        return solve_slot(state.energy_avail_j, c, k, a, t_min, p_max)
    except InfeasibleUser:
        raise InfeasibleUser(user.id) from None


def bisection_oracle(user: UserProfile, sys: SystemParams,
                     state: StartState) -> tuple[float, float]:
    """Independent bisection solution of the same slot problem."""
    c, k, a, t_min, p_max = slot_coeffs(user, sys)
    try:
        return bisect_slot(state.energy_avail_j, c, k, a, t_min, p_max)
    except InfeasibleUser:
        raise InfeasibleUser(user.id) from None


def _evaluate(users, sys, capped: bool, tag: str) -> Schedule:
    if not users:
        raise ValueError("user list is empty")
    ids = [u.id for u in users]
    if len(set(ids)) != len(ids):
        raise ValueError(f"duplicate user ids in {ids}")
    allocations = []
    penalties = []
    t = 0.0
    for pos, user in enumerate(users):
        c, k, a, t_min, p_max = slot_coeffs(user, sys)
        eps = user.battery_j + c * t
        try:
            if capped:
                p, tau = solve_slot(eps, c, k, a, t_min, p_max)
            else:
                p, tau = solve_slot_uncapped(eps, c, k, a)
        except InfeasibleUser:
            raise InfeasibleUser(user.id, position=pos) from None
        allocations.append(Allocation(user.id, t, tau, p, p * tau))
        penalties.append(tau - t_min)
        t += tau
    return Schedule(ids, allocations, penalties, t, tag)


def evaluate_order(users: list[UserProfile], sys: SystemParams,
                   algorithm_tag: str = "OTPA") -> Schedule:
    """Optimal capped allocation for a fixed transmission order.

    Slots are contiguous from frame time zero (an initial idle period
    never helps: transmitting the same data over the idle time plus the
    original slot uses less energy).  Each slot's budget is the battery
    plus harvest accumulated up to its start.
    """
    return _evaluate(users, sys, capped=True, tag=algorithm_tag)


def evaluate_order_pca(users: list[UserProfile], sys: SystemParams,
                       algorithm_tag: str = "PCA") -> Schedule:
    """Fixed-order evaluation with the power cap disabled."""
    return _evaluate(users, sys, capped=False, tag=algorithm_tag)
