"""Real branches of the Lambert W function.

Solves ``w * exp(w) = y`` for real ``y``.  The principal branch covers
``y >= -1/e`` with ``w >= -1``; the lower branch covers ``-1/e <= y < 0``
with ``w <= -1``.  Evaluation uses Halley's method with branch-specific
seeds, a square-root series right at the branch point ``y = -1/e`` (where
the derivative of W blows up and Halley degenerates), and a logarithmic
Newton form where ``w * exp(w)`` would lose floating-point scale.
"""

import math
from enum import Enum

INV_E = math.exp(-1.0)

_CLAMP_TOL = 1e-15    # arguments this far below -1/e are clamped onto it
_NEAR_BRANCH = 1e-8   # switch to the branch-point series inside this window
_REL_STEP = 1e-14
_MAX_ITER = 50

# Coefficients of W = -1 + p - p^2/3 + ... in p = sqrt(2*(e*y + 1)).
_SERIES = (-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0, 769.0 / 17280.0)


class DomainError(ValueError):
    """Argument lies outside the real domain of the requested branch."""


class Branch(Enum):
    PRINCIPAL = "principal"
    LOWER = "lower"


def _branch_point_series(p: float) -> float:
    # p > 0 selects the principal branch, p < 0 the lower branch
    acc = 0.0
    for coeff in reversed(_SERIES[1:]):
        acc = (acc + coeff) * p
    return _SERIES[0] + acc


def _halley(y: float, w: float) -> float:
    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - y
        w1 = w + 1.0
        if w1 == 0.0:
            w1 = 1e-300
        step = f / (ew * w1 - (w + 2.0) * f / (2.0 * w1))
        w -= step
        if abs(step) <= _REL_STEP * max(abs(w), 1e-300):
            break
    return w


def _log_newton(m: float, w: float, sign: float) -> float:
    # Solve w + log(sign*w) = m; sign=+1 for large principal-branch values,
    # sign=-1 for the lower branch.  Well conditioned whenever |w| >> 1.
    for _ in range(_MAX_ITER):
        g = w + math.log(sign * w) - m
        step = g * w / (w + 1.0)
        w -= step
        if abs(step) <= _REL_STEP * max(abs(w), 1e-300):
            break
    return w


def _check_domain(y: float) -> float:
    if y < -INV_E:
        if y < -INV_E - _CLAMP_TOL:
            raise DomainError(f"lambert_w argument {y!r} below -1/e")
        return -INV_E
    return y


def _principal(y: float) -> float:
    y = _check_domain(y)
    if y == 0.0:
        return 0.0
    d = y + INV_E
    if d <= _NEAR_BRANCH:
        return _branch_point_series(math.sqrt(2.0 * math.e * d))
    if y > 1e8:
        # log form avoids overflow of exp(w) for large arguments
        m = math.log(y)
        return _log_newton(m, m - math.log(m), 1.0)
    if abs(y) < 0.2:
        w0 = y * (1.0 - y + 1.5 * y * y)
    elif y < 0.0:
        w0 = _branch_point_series(math.sqrt(2.0 * math.e * d))
    else:
        w0 = math.log1p(y)
    return _halley(y, w0)


def _lower(y: float) -> float:
    if y >= 0.0:
        raise DomainError(f"lower branch requires y < 0, got {y!r}")
    y = _check_domain(y)
    d = y + INV_E
    if d <= _NEAR_BRANCH:
        return _branch_point_series(-math.sqrt(2.0 * math.e * d))
    if y > -0.05:
        # tiny |y| maps to very negative w where w*exp(w) underflows
        return lambert_w_lower_log(math.log(-y))
    return _halley(y, _branch_point_series(-math.sqrt(2.0 * math.e * d)))


def lambert_w(y: float, branch: Branch = Branch.PRINCIPAL) -> float:
    """Evaluate the requested real branch of W at ``y``.

    The result ``w`` satisfies ``|w*exp(w) - y| <= 1e-12 * max(1, |y|)``.
    Arguments within ``1e-15`` below ``-1/e`` are clamped onto the branch
    point; anything lower raises :class:`DomainError`, as does a
    non-negative argument on the lower branch.
    """
    if branch is Branch.PRINCIPAL:
        return _principal(y)
    if branch is Branch.LOWER:
        return _lower(y)
    raise DomainError(f"unknown branch {branch!r}")


def lambert_w_lower_log(log_neg_y: float) -> float:
    """Lower branch evaluated from ``log(-y)`` instead of ``y``.

    Solves ``w + log(-w) = log_neg_y`` for ``w <= -1``.  This form stays
    accurate when ``-y`` is far below the smallest normal double (the
    direct argument would underflow to zero).  Requires
    ``log_neg_y <= -1``; accuracy degrades within ~1e-8 of that endpoint,
    where callers should prefer :func:`lambert_w` on the direct argument.
    """
    m = log_neg_y
    if m > -1.0:
        raise DomainError(f"log(-y) must be <= -1, got {m!r}")
    if m > -1.5:
        delta = math.sqrt(-2.0 * (m + 1.0))
        w0 = -1.0 - delta - delta * delta / 3.0
    else:
        w0 = m - math.log(-m)
    return _log_newton(m, w0, -1.0)
