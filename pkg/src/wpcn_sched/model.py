"""Physical-layer quantities for an RF-harvesting TDMA uplink.

All values are linear SI units: watts, seconds, joules, hertz, bits.
Decibel conversions happen at configuration parsing only, never here.
"""

import math
from dataclasses import dataclass

LN2 = math.log(2.0)


def _sigmoid(z: float) -> float:
    # numerically stable logistic, exact 0/1 saturation for |z| large
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


@dataclass(frozen=True)
class EhParams:
    """Logistic harvester curve: saturation power, steepness, turn-on threshold.

    ``ps_saturation`` is the maximum harvested power in watts,
    ``a_rate`` the charging steepness in 1/W, and ``b_threshold`` the
    turn-on threshold in watts.
    """

    ps_saturation: float
    a_rate: float
    b_threshold: float

    def __post_init__(self):
        if not self.ps_saturation > 0.0:
            raise ValueError(f"ps_saturation must be > 0, got {self.ps_saturation}")
        if not self.a_rate > 0.0:
            raise ValueError(f"a_rate must be > 0, got {self.a_rate}")
        if self.b_threshold < 0.0:
            raise ValueError(f"b_threshold must be >= 0, got {self.b_threshold}")


@dataclass(frozen=True)
class UserProfile:
    """Static per-user data: channels, demand, initial battery, harvester."""

    id: int
    h_down: float        # downlink channel gain, linear
    g_up: float          # uplink channel gain, linear
    demand_bits: float
    battery_j: float
    eh: EhParams

    def __post_init__(self):
        if not self.h_down > 0.0:
            raise ValueError(f"h_down must be > 0, got {self.h_down}")
        if not self.g_up > 0.0:
            raise ValueError(f"g_up must be > 0, got {self.g_up}")
        if not self.demand_bits > 0.0:
            raise ValueError(f"demand_bits must be > 0, got {self.demand_bits}")
        if self.battery_j < 0.0:
            raise ValueError(f"battery_j must be >= 0, got {self.battery_j}")


@dataclass(frozen=True)
class SystemParams:
    """Network-wide constants shared by every user."""

    bandwidth_hz: float
    p_hap_w: float                 # access-point transmit power
    p_max_w: float                 # per-user transmit power cap
    noise_density_w_per_hz: float
    beta_si: float                 # self-interference leakage, linear in [0, 1]

    def __post_init__(self):
        for name in ("bandwidth_hz", "p_hap_w", "p_max_w", "noise_density_w_per_hz"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if not 0.0 <= self.beta_si <= 1.0:
            raise ValueError(f"beta_si must be in [0, 1], got {self.beta_si}")


def harvest_rate(user: UserProfile, sys: SystemParams) -> float:
    """Harvested power in watts for the user's downlink input power.

    Logistic curve rescaled for a zero-input zero-output response; the
    result lies in [0, ps_saturation), reaching the saturation value only
    up to floating-point rounding.
    """
    eh = user.eh
    psi = _sigmoid(eh.a_rate * (user.h_down * sys.p_hap_w - eh.b_threshold))
    omega = _sigmoid(-eh.a_rate * eh.b_threshold)
    return eh.ps_saturation * (psi - omega) / (1.0 - omega)


def sinr_gain(user: UserProfile, sys: SystemParams) -> float:
    """Per-watt SINR gain at the access point's receiver.

    Uplink gain over the noise-plus-self-interference floor; the floor
    combines thermal noise across the band with the fraction of the
    access point's own transmit power leaking into its receiver.
    """
    floor = sys.noise_density_w_per_hz * sys.bandwidth_hz + sys.beta_si * sys.p_hap_w
    return user.g_up / floor


def rate_bps(user: UserProfile, sys: SystemParams, p_tx: float) -> float:
    """Achievable uplink rate in bits/s at transmit power ``p_tx``."""
    if p_tx < 0.0:
        raise ValueError(f"p_tx must be >= 0, got {p_tx}")
    return sys.bandwidth_hz * math.log1p(sinr_gain(user, sys) * p_tx) / LN2


def min_transmission_time(user: UserProfile, sys: SystemParams) -> float:
    """Slot duration needed to ship the demand at the power cap.

    Equals demand over the cap-power rate; written in nat form so the
    slot solvers reproduce it bit-for-bit.
    """
    a = user.demand_bits * LN2 / sys.bandwidth_hz
    return a / math.log1p(sinr_gain(user, sys) * sys.p_max_w)
