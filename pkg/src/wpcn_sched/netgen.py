"""Seeded random network realizations: disk placement, path loss, fading.

Users are placed uniformly in a disk around the access point at its
center.  Each link's large-scale loss follows a log-distance model with
lognormal shadowing; small-scale Rayleigh fading multiplies the linear
gain by a unit-mean exponential power fade, drawn independently for the
downlink and uplink of the same user (the large-scale part is shared).

Stream splitting: user ``i`` of a realization draws from the Philox
substream ``SeedSequence(entropy=seed, spawn_key=(i,))``, in the fixed
order radius, angle, shadowing, downlink fade, uplink fade.  Adding
users to a realization therefore never perturbs the draws of existing
users, and regeneration from the same seed is bit-identical.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import EhParams, SystemParams, UserProfile

_MIN_DISTANCE_M = 1e-9   # guards log10(0) for a draw exactly at the center


class StatisticalFailure(AssertionError):
    """Empirical draw statistics fell outside the contracted tolerance."""


@dataclass(frozen=True)
class TopologyParams:
    """Geometry, propagation constants and the realization seed."""

    n_users: int
    seed: int
    radius_m: float = 10.0
    pl_d0_db: float = 30.0
    d0_m: float = 1.0
    alpha_exponent: float = 2.76
    sigma_shadow_db: float = 4.0
    rayleigh_enabled: bool = True

    def __post_init__(self):
        if self.n_users < 1:
            raise ValueError(f"n_users must be >= 1, got {self.n_users}")
        if not self.radius_m > 0.0:
            raise ValueError(f"radius_m must be > 0, got {self.radius_m}")
        if not self.alpha_exponent > 0.0:
            raise ValueError(f"alpha_exponent must be > 0, got {self.alpha_exponent}")
        if self.sigma_shadow_db < 0.0:
            raise ValueError(f"sigma_shadow_db must be >= 0, got {self.sigma_shadow_db}")


@dataclass(frozen=True)
class UserTemplate:
    """Per-user constants shared by every generated user."""

    demand_bits: float
    battery_j: float
    eh: EhParams


@dataclass(frozen=True)
class Realization:
    """One Monte-Carlo network draw."""

    users: tuple[UserProfile, ...]
    sys: SystemParams
    seed: int
    positions: tuple[tuple[float, float], ...]


def _user_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    )


def generate(params: TopologyParams, sys_template: SystemParams,
             user_template: UserTemplate) -> Realization:
    """Draw one seeded network realization."""
    users = []
    positions = []
    for i in range(params.n_users):
        rng = _user_rng(params.seed, i)
        r = params.radius_m * math.sqrt(rng.uniform())   # area-uniform radius
        theta = 2.0 * math.pi * rng.uniform()
        shadow_db = params.sigma_shadow_db * rng.standard_normal()
        fade_h = rng.exponential() if params.rayleigh_enabled else 1.0
        fade_g = rng.exponential() if params.rayleigh_enabled else 1.0

        x = r * math.cos(theta)
        y = r * math.sin(theta)
        d = max(math.hypot(x, y), _MIN_DISTANCE_M)
        loss_db = (params.pl_d0_db
                   + 10.0 * params.alpha_exponent * math.log10(d / params.d0_m)
                   + shadow_db)
        g_large = 10.0 ** (-loss_db / 10.0)
        users.append(UserProfile(
            id=i,
            h_down=g_large * fade_h,
            g_up=g_large * fade_g,
            demand_bits=user_template.demand_bits,
            battery_j=user_template.battery_j,
            eh=user_template.eh,
        ))
        positions.append((x, y))
    return Realization(tuple(users), sys_template, params.seed, tuple(positions))


def mean_gain_check(params: TopologyParams, trials: int = 100_000) -> dict:
    """Sanity statistics of the fading and shadowing draws.

    Draws ``trials`` independent fade/shadowing samples from the
    realization's base stream and checks the exponential power fade has a
    mean within 1% of one and the shadowing standard deviation is within
    2% of the configured value.  Raises :class:`StatisticalFailure`
    outside those tolerances.  Intended for tests and diagnostics.
    """
    if trials < 10_000:
        raise ValueError(f"trials must be >= 1e4, got {trials}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=params.seed)))
    fades = rng.exponential(size=trials)
    shadows = params.sigma_shadow_db * rng.standard_normal(size=trials)
    stats = {
        "fade_mean": float(fades.mean()),
        "shadow_std_db": float(shadows.std()),
        "trials": trials,
    }
    if abs(stats["fade_mean"] - 1.0) > 0.01:
        raise StatisticalFailure(f"fade mean {stats['fade_mean']} outside 1% of 1.0")
    if abs(stats["shadow_std_db"] - params.sigma_shadow_db) > 0.02 * max(params.sigma_shadow_db, 1e-300):
        if params.sigma_shadow_db > 0.0 or stats["shadow_std_db"] != 0.0:
            raise StatisticalFailure(
                f"shadow std {stats['shadow_std_db']} dB outside 2% of {params.sigma_shadow_db} dB"
            )
    return stats


# ---------------------------------------------------------------------------
# plain-text instance files: one system header row, one row per user,
# decimal text at 17 significant digits for bit-faithful round-trips

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_instance(path, realization: Realization) -> None:
    lines = ["# wpcn instance v1"]
    s = realization.sys
    lines.append("sys " + " ".join(_fmt(v) for v in (
        s.bandwidth_hz, s.p_hap_w, s.p_max_w, s.noise_density_w_per_hz, s.beta_si))
        + f" {realization.seed}")
    for user, (x, y) in zip(realization.users, realization.positions):
        lines.append("user " + f"{user.id} " + " ".join(_fmt(v) for v in (
            x, y, user.h_down, user.g_up, user.demand_bits, user.battery_j,
            user.eh.ps_saturation, user.eh.a_rate, user.eh.b_threshold)))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_instance(path) -> Realization:
    sys_params = None
    seed = 0
    users = []
    positions = []
    with open(path, encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if fields[0] == "sys":
                if len(fields) != 7:
                    raise ValueError(f"{path}:{lineno}: sys row needs 6 values")
                vals = [float(v) for v in fields[1:6]]
                sys_params = SystemParams(*vals)
                seed = int(fields[6])
            elif fields[0] == "user":
                if len(fields) != 11:
                    raise ValueError(f"{path}:{lineno}: user row needs 10 values")
                uid = int(fields[1])
                x, y, h, g, demand, battery, ps, a_rate, b_thr = (float(v) for v in fields[2:])
                users.append(UserProfile(uid, h, g, demand, battery,
                                         EhParams(ps, a_rate, b_thr)))
                positions.append((x, y))
            else:
                raise ValueError(f"{path}:{lineno}: unknown row kind {fields[0]!r}")
    if sys_params is None:
        raise ValueError(f"{path}: missing sys row")
    if not users:
        raise ValueError(f"{path}: no user rows")
    return Realization(tuple(users), sys_params, seed, tuple(positions))
