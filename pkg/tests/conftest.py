"""Shared builders for white-box solver instances.

The saturated-harvester trick pins the harvest rate exactly: with a zero
turn-on threshold and a steep curve driven far into saturation, the
logistic evaluates to exactly 1.0 in doubles and the harvest rate equals
the saturation power bit-for-bit.  That lets tests prescribe (c, k)
pairs directly through the public profile types.
"""

import math

from wpcn_sched import EhParams, SystemParams, UserProfile

LN2 = math.log(2.0)

# noise*bandwidth + beta*p_hap = 1e-14 + 1e-7; tests prescribe k against it
K_FLOOR = 1e-14 + 1e-7


def make_sys(p_max=1e-3, p_hap=1.0, bandwidth=1e6) -> SystemParams:
    return SystemParams(
        bandwidth_hz=bandwidth,
        p_hap_w=p_hap,
        p_max_w=p_max,
        noise_density_w_per_hz=1e-14 / bandwidth,
        beta_si=1e-7 / p_hap,
    )


def make_user(uid, k, c, demand=100.0, battery=1e-9) -> UserProfile:
    """User with prescribed SINR gain ``k`` and exact harvest rate ``c``."""
    return UserProfile(
        id=uid,
        h_down=1.0,
        g_up=k * K_FLOOR,
        demand_bits=demand,
        battery_j=battery,
        eh=EhParams(ps_saturation=c, a_rate=1e6, b_threshold=0.0),
    )


def make_user_no_harvest(uid, k, demand=100.0, battery=0.0) -> UserProfile:
    """User whose harvest rate rounds to exactly zero watts."""
    return UserProfile(
        id=uid,
        h_down=1e-300,
        g_up=k * K_FLOOR,
        demand_bits=demand,
        battery_j=battery,
        eh=EhParams(ps_saturation=1.0, a_rate=1e-6, b_threshold=0.0),
    )
