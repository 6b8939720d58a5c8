"""Transmission-order algorithms over a set of harvesting users.

Two greedy polynomial-time heuristics (pick the minimum-penalty user,
pick the maximum-affordable-power user), an exact depth-first tree
search with penalty-based pruning, and an exhaustive permutation sweep
used as the correctness oracle.  All of them delegate per-slot physics
to :mod:`wpcn_sched.power`; ties break toward the lowest user id or the
lexicographically smallest prefix so that identical inputs always yield
identical schedules.
"""

import math
from typing import NamedTuple

from .model import SystemParams, UserProfile
from .penalty import ZERO_PENALTY_TOL
from .power import (
    Allocation,
    InfeasibleUser,
    Schedule,
    evaluate_order,
    evaluate_order_pca,
    slot_coeffs,
    solve_slot,
)


class SizeCapExceeded(Exception):
    """Instance exceeds a configured search-size cap."""


class SearchNode(NamedTuple):
    """A scheduled prefix in the order-search tree."""

    prefix: tuple[int, ...]
    remaining: tuple[int, ...]
    elapsed_s: float
    last_penalty_s: float

    @property
    def size(self) -> int:
        return len(self.prefix)


def _sorted_users(users) -> list[UserProfile]:
    out = sorted(users, key=lambda u: u.id)
    if not out:
        raise ValueError("user set is empty")
    if len({u.id for u in out}) != len(out):
        raise ValueError("duplicate user ids")
    return out


def _coeff_map(users, sys):
    return {u.id: slot_coeffs(u, sys) + (u.battery_j,) for u in users}


def _greedy(users, sys, pick, tag: str) -> Schedule:
    users = _sorted_users(users)
    coeffs = _coeff_map(users, sys)
    pending = {u.id: u for u in users}
    order, allocations, penalties = [], [], []
    t = 0.0
    while pending:
        slots = {}
        for uid in sorted(pending):
            c, k, a, t_min, p_max, battery = coeffs[uid]
            try:
                slots[uid] = solve_slot(battery + c * t, c, k, a, t_min, p_max)
            except InfeasibleUser:
                raise InfeasibleUser(uid, position=len(order)) from None
        uid = pick(slots, coeffs)
        p, tau = slots[uid]
        t_min = coeffs[uid][3]
        order.append(uid)
        allocations.append(Allocation(uid, t, tau, p, p * tau))
        penalties.append(tau - t_min)
        t += tau
        del pending[uid]
    return Schedule(order, allocations, penalties, t, tag)


def mpa(users, sys: SystemParams) -> Schedule:
    """Greedy minimum-penalty ordering, O(n^2) slot solves.

    At each step every unscheduled user's penalty is evaluated at the
    current time and the smallest one (lowest id on ties) transmits next.
    """
    def pick(slots, coeffs):
        return min(slots, key=lambda uid: (slots[uid][1] - coeffs[uid][3], uid))
    return _greedy(users, sys, pick, "MPA")


def mtpa(users, sys: SystemParams) -> Schedule:
    """Greedy maximum-transmit-power ordering, O(n^2) slot solves.

    At each step the user that can afford the highest capped power at the
    current time transmits next (lowest id on ties); a user that can
    afford the full power cap is always optimal to schedule immediately.
    """
    def pick(slots, coeffs):
        return min(slots, key=lambda uid: (-slots[uid][0], uid))
    return _greedy(users, sys, pick, "MTPA")


def bfa(users, sys: SystemParams, user_cap: int = 9) -> Schedule:
    """Exhaustive minimum over all orders; the correctness oracle.

    Walks the full permutation tree depth-first with shared prefixes, so
    the work is sum over k of n!/(n-k)! slot solves rather than n * n!.
    Ties keep the lexicographically smallest optimal order.  ``node_count``
    reports the number of slot solves.  Refuses instances above
    ``user_cap`` users.
    """
    users = _sorted_users(users)
    if len(users) > user_cap:
        raise SizeCapExceeded(f"{len(users)} users exceeds BFA cap {user_cap}")
    coeffs = _coeff_map(users, sys)
    ids = [u.id for u in users]
    best_len = math.inf
    best_order = None
    solves = 0

    def walk(prefix, remaining, elapsed):
        nonlocal best_len, best_order, solves
        if not remaining:
            if elapsed < best_len:
                best_len = elapsed
                best_order = prefix
            return
        for i, uid in enumerate(remaining):
            c, k, a, t_min, p_max, battery = coeffs[uid]
            try:
                _, tau = solve_slot(battery + c * elapsed, c, k, a, t_min, p_max)
            except InfeasibleUser:
                raise InfeasibleUser(uid, position=len(prefix)) from None
            solves += 1
            walk(prefix + [uid], remaining[:i] + remaining[i + 1:], elapsed + tau)

    walk([], tuple(ids), 0.0)
    by_id = {u.id: u for u in users}
    schedule = evaluate_order([by_id[i] for i in best_order], sys, algorithm_tag="BFA")
    schedule.node_count = solves
    return schedule


def fpa(users, sys: SystemParams, node_cap: int | None = None) -> Schedule:
    """Exact pruned search over transmission orders.

    Depth-first by prefix size over the order tree.  Among the deepest
    open prefixes the one with the smallest last-slot penalty is expanded
    next; when that penalty is zero its siblings (same parent, same size)
    are discarded, because scheduling a zero-penalty user in that slot
    cannot be beaten from the same parent.  All first-level prefixes
    count as siblings for this rule.  A prefix whose elapsed time already
    reaches the best complete schedule is discarded as well.  Returns the
    optimal schedule (same length as :func:`bfa`) with ``node_count`` set
    to the number of prefixes evaluated; raises :class:`SizeCapExceeded`
    if that count would pass ``node_cap``.
    """
    users = _sorted_users(users)
    coeffs = _coeff_map(users, sys)
    n = len(users)

    def child(prefix, remaining, elapsed, uid, pos):
        c, k, a, t_min, p_max, battery = coeffs[uid]
        try:
            _, tau = solve_slot(battery + c * elapsed, c, k, a, t_min, p_max)
        except InfeasibleUser:
            raise InfeasibleUser(uid, position=len(prefix)) from None
        rest = remaining[:pos] + remaining[pos + 1:]
        return SearchNode(prefix + (uid,), rest, elapsed + tau, tau - t_min)

    all_ids = tuple(u.id for u in users)
    levels: list[list[SearchNode]] = [[] for _ in range(n + 1)]
    evaluated = 0
    for pos, uid in enumerate(all_ids):
        levels[1].append(child((), all_ids, 0.0, uid, pos))
        evaluated += 1

    best_len = math.inf
    best_order = None
    deepest = 1
    while deepest > 0:
        bucket = levels[deepest]
        if not bucket:
            deepest -= 1
            continue
        if deepest == n:
            i = min(range(len(bucket)), key=lambda j: bucket[j].prefix)
            node = bucket.pop(i)
            if node.elapsed_s < best_len:
                best_len = node.elapsed_s
                best_order = node.prefix
            continue
        i = min(range(len(bucket)),
                key=lambda j: (bucket[j].last_penalty_s, bucket[j].prefix))
        node = bucket.pop(i)
        if node.last_penalty_s <= ZERO_PENALTY_TOL:
            parent = node.prefix[:-1]
            bucket[:] = [nd for nd in bucket if nd.prefix[:-1] != parent]
        if node.elapsed_s >= best_len:
            continue
        new = [child(node.prefix, node.remaining, node.elapsed_s, uid, pos)
               for pos, uid in enumerate(node.remaining)]
        evaluated += len(new)
        if node_cap is not None and evaluated > node_cap:
            raise SizeCapExceeded(f"FPA evaluated more than {node_cap} nodes")
        levels[deepest + 1].extend(new)
        deepest += 1

    by_id = {u.id: u for u in users}
    schedule = evaluate_order([by_id[i] for i in best_order], sys, algorithm_tag="FPA")
    schedule.node_count = evaluated
    return schedule


def fixed_order(users: list[UserProfile], sys: SystemParams, cap: bool = True) -> Schedule:
    """Baseline: keep the given order, allocate each slot optimally.

    ``cap=True`` enforces the per-user power cap (tag OTPA); ``cap=False``
    removes it (tag PCA).
    """
    if cap:
        return evaluate_order(list(users), sys, algorithm_tag="OTPA")
    return evaluate_order_pca(list(users), sys, algorithm_tag="PCA")
