import math

import mpmath as mp
import pytest

from conftest import make_sys, make_user
from wpcn_sched import (
    EhParams,
    SystemParams,
    UserProfile,
    harvest_rate,
    min_transmission_time,
    rate_bps,
    sinr_gain,
)

EH = EhParams(ps_saturation=0.01, a_rate=150.0, b_threshold=0.014)


def user_with_input(received_w, sys, g_up=1e-6):
    # h_down chosen so h_down * p_hap equals the requested input power
    return UserProfile(0, received_w / sys.p_hap_w, g_up, 100.0, 0.0, EH)


def test_harvest_zero_input_zero_output():
    sys = SystemParams(1e6, 1.0, 1e-3, 1e-20, 1e-7)
    user = UserProfile(0, 1e-300, 1e-6, 100.0, 0.0, EH)
    assert abs(harvest_rate(user, sys)) <= 1e-15


def test_harvest_saturates_to_ps():
    sys = SystemParams(1e6, 1.0, 1e-3, 1e-20, 1e-7)
    user = user_with_input(1e6 * EH.b_threshold, sys)
    assert harvest_rate(user, sys) == pytest.approx(EH.ps_saturation, rel=1e-9)


def test_harvest_frozen_value_and_mpmath_cross_check():
    sys = SystemParams(1e6, 1.0, 1e-3, 1e-20, 1e-7)
    user = user_with_input(0.02, sys)
    got = harvest_rate(user, sys)
    # frozen from a 50-digit evaluation of the logistic model
    assert got == pytest.approx(0.0067555341113171402534, rel=1e-13)
    mp.mp.dps = 50
    ps, a, b, x = (mp.mpf("0.01"), mp.mpf(150), mp.mpf("0.014"), mp.mpf("0.02"))
    psi = 1 / (1 + mp.e ** (-a * (x - b)))
    omega = 1 / (1 + mp.e ** (a * b))
    ref = float(ps * (psi - omega) / (1 - omega))
    assert got == pytest.approx(ref, rel=1e-13)


def test_harvest_monotone_in_input_and_bounded():
    sys = SystemParams(1e6, 1.0, 1e-3, 1e-20, 1e-7)
    inputs = [10.0 ** e for e in range(-9, 3)]
    rates = [harvest_rate(user_with_input(x, sys), sys) for x in inputs]
    assert all(b >= a for a, b in zip(rates, rates[1:]))
    # saturation rounds the logistic to 1.0 in doubles, so allow C == ps there
    assert all(0.0 <= r <= EH.ps_saturation for r in rates)
    assert all(r < EH.ps_saturation for r, x in zip(rates, inputs) if x < EH.b_threshold)


def test_sinr_gain_identity_case():
    # beta = 0 and g equal to the total noise power gives exactly 1/W gain
    sys = SystemParams(1e6, 1.0, 1e-3, 1e-14 / 1e6, 0.0)
    user = UserProfile(0, 1.0, 1e-14, 100.0, 0.0, EH)
    assert sinr_gain(user, sys) == pytest.approx(1.0, rel=1e-15)


def test_sinr_gain_linear_in_g():
    sys = SystemParams(1e6, 1.0, 1e-3, 1e-20, 1e-7)
    u1 = UserProfile(0, 1.0, 1e-6, 100.0, 0.0, EH)
    u2 = UserProfile(1, 1.0, 2e-6, 100.0, 0.0, EH)
    assert sinr_gain(u2, sys) == pytest.approx(2.0 * sinr_gain(u1, sys), rel=1e-15)


def test_sinr_gain_frozen_value():
    sys = SystemParams(1e6, 1.0, 1e-3, 1e-14 / 1e6, 1e-7)
    user = UserProfile(0, 1.0, 1e-6, 100.0, 0.0, EH)
    assert sinr_gain(user, sys) == pytest.approx(9.9999990000001, rel=1e-6)


def test_rate_zero_power_zero_rate():
    sys = make_sys()
    user = make_user(0, k=1e4, c=1e-6)
    assert rate_bps(user, sys, 0.0) == 0.0


def test_rate_log2_landmarks():
    sys = make_sys()
    user = make_user(0, k=1e4, c=1e-6)
    assert rate_bps(user, sys, 1e-4) == pytest.approx(1e6, rel=1e-12)      # k*p = 1
    assert rate_bps(user, sys, 3e-4) == pytest.approx(2e6, rel=1e-12)      # k*p = 3


def test_rate_increasing_and_concave():
    sys = make_sys()
    user = make_user(0, k=1e4, c=1e-6)
    grid = [i * 1e-4 for i in range(1, 40)]
    rates = [rate_bps(user, sys, p) for p in grid]
    assert all(b > a for a, b in zip(rates, rates[1:]))
    second = [rates[i + 1] - 2 * rates[i] + rates[i - 1] for i in range(1, len(rates) - 1)]
    assert all(d < 0 for d in second)


def test_min_time_landmarks():
    # k*p_max = 1 -> rate 1e6 b/s -> 1e-4 s for 100 bits
    sys = make_sys(p_max=1e-4)
    user = make_user(0, k=1e4, c=1e-6)
    assert min_transmission_time(user, sys) == pytest.approx(1e-4, rel=1e-12)
    sys3 = make_sys(p_max=3e-4)
    assert min_transmission_time(user, sys3) == pytest.approx(5e-5, rel=1e-12)


def test_min_time_linear_in_demand():
    sys = make_sys()
    u1 = make_user(0, k=1e4, c=1e-6, demand=100.0)
    u2 = make_user(1, k=1e4, c=1e-6, demand=50.0)
    assert min_transmission_time(u2, sys) == pytest.approx(
        0.5 * min_transmission_time(u1, sys), rel=1e-14)


def test_invariant_validation():
    with pytest.raises(ValueError):
        EhParams(0.0, 150.0, 0.014)
    with pytest.raises(ValueError):
        EhParams(0.01, -1.0, 0.014)
    with pytest.raises(ValueError):
        UserProfile(0, 0.0, 1e-6, 100.0, 0.0, EH)
    with pytest.raises(ValueError):
        UserProfile(0, 1e-6, 1e-6, 0.0, 0.0, EH)
    with pytest.raises(ValueError):
        UserProfile(0, 1e-6, 1e-6, 100.0, -1.0, EH)
    with pytest.raises(ValueError):
        SystemParams(1e6, 1.0, 1e-3, 1e-20, 1.5)
    with pytest.raises(ValueError):
        SystemParams(1e6, 0.0, 1e-3, 1e-20, 1e-7)


def test_rate_rejects_negative_power():
    sys = make_sys()
    user = make_user(0, k=1e4, c=1e-6)
    with pytest.raises(ValueError):
        rate_bps(user, sys, -1.0)
