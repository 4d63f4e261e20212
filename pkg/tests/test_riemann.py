import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq

from conslaw import get_model, sample_fan, solve_riemann, wave_curve
from conslaw.errors import AmplitudeTooLarge
from conslaw.riemann import (
    TOL_RH,
    WaveKind,
    fan_from_dict,
    fan_to_dict,
    lax_admissible_family,
    rh_residual,
    shock_components,
    shock_speed,
)

GAMMA = 1.4


def _c(v):
    return math.sqrt(GAMMA) * v ** (-(GAMMA + 1) / 2)


def _p(v):
    return v ** (-GAMMA)


def _psystem_middle_state(left, right):
    """1-rarefaction then 2-shock, from the Riemann invariant and Hugoniot relations."""
    vl, ul = left
    vr, ur = right

    def u_after_1(v1):
        return ul + quad(_c, vl, v1)[0]

    def mismatch(v1):
        return u_after_1(v1) - math.sqrt(-(_p(vr) - _p(v1)) * (vr - v1)) - ur

    v1 = brentq(mismatch, vl + 1e-12, vr - 1e-12, xtol=1e-15)
    return np.array([v1, u_after_1(v1)])


def test_psystem_golden_middle_state(psys):
    fan = solve_riemann(psys, [1.0, 0.0], [1.2, 0.0])
    oracle = _psystem_middle_state((1.0, 0.0), (1.2, 0.0))
    assert np.allclose(oracle, [1.09456051, 0.10594688], atol=1e-8)
    assert np.allclose(fan.states[1], oracle, atol=1e-9)
    assert fan.waves[0].kind is WaveKind.RAREFACTION
    assert fan.waves[1].kind is WaveKind.SHOCK


def test_rarefaction_curve_is_arc_length_parametrized(psys):
    # 2-curve through (1, 0): du/dv = -c(v), v decreasing, |du/ds| = 1
    s = 0.1
    v = brentq(lambda v: quad(lambda w: math.sqrt(1 + _c(w) ** 2), v, 1.0)[0] - s, 0.5, 1.0, xtol=1e-15)
    u = quad(_c, v, 1.0)[0]
    assert np.allclose(wave_curve(psys, 2, [1.0, 0.0], s), [v, u], atol=1e-9)


def test_burgers_shock(burgers):
    fan = solve_riemann(burgers, [1.0], [0.0])
    (w,) = fan.waves
    assert w.kind is WaveKind.SHOCK
    assert w.speed == pytest.approx(0.5, abs=1e-14)
    assert sample_fan(fan, 0.49)[0] == 1.0
    assert sample_fan(fan, 0.51)[0] == 0.0


def test_burgers_rarefaction_is_x_over_t(burgers):
    fan = solve_riemann(burgers, [0.0], [1.0])
    assert fan.waves[0].kind is WaveKind.RAREFACTION
    for xi in np.linspace(0.01, 0.99, 17):
        assert sample_fan(fan, xi)[0] == pytest.approx(xi, abs=1e-12)
    assert sample_fan(fan, -0.5)[0] == 0.0
    assert sample_fan(fan, 1.5)[0] == 1.0


def test_shock_speed_matches_rh(psys):
    u0 = np.array([1.0, 0.0])
    u1 = wave_curve(psys, 1, u0, -0.15)
    lam = shock_speed(psys, 1, u0, -0.15)
    assert np.max(np.abs(rh_residual(psys, u0, u1, lam))) < TOL_RH
    assert lax_admissible_family(psys, u0, u1, lam) == 1


def test_wrong_side_shock_is_not_lax(psys):
    u0 = np.array([1.0, 0.0])
    u1 = wave_curve(psys, 1, u0, 0.15)
    lam = shock_speed(psys, 1, u0, 0.15)
    assert lax_admissible_family(psys, u0, u1, lam) is None


def test_linear_system_contacts():
    m = get_model("linear")
    fan = solve_riemann(m, [0.0, 0.0], [1.0, 2.0])
    assert [w.kind for w in fan.waves] == [WaveKind.CONTACT, WaveKind.CONTACT]
    assert [w.speed for w in fan.waves] == pytest.approx([-1.0, 1.0])
    assert np.allclose(fan.states[1], [1.0, 0.0])


def test_too_large_jump(psys):
    with pytest.raises(AmplitudeTooLarge):
        solve_riemann(psys, [0.5, -1.4], [2.4, 1.4])


def test_shock_components_of_equal_states(psys):
    sc = shock_components(psys, [1.0, 0.0], [1.0, 0.0])
    assert np.all(sc.q == 0)


def test_shock_components_compose(psys):
    u, v = np.array([1.0, 0.0]), np.array([1.1, 0.05])
    sc = shock_components(psys, u, v)
    for i in range(2):
        a, b = sc.states[i], sc.states[i + 1]
        assert np.max(np.abs(rh_residual(psys, a, b, sc.speeds[i]))) < 1e-9


small = st.floats(-0.12, 0.12)


@given(small, small, small, small)
def test_fan_properties(dv0, du0, dv1, du1):
    m = get_model("p-system")
    ul = np.array([1.0 + dv0, du0])
    ur = np.array([1.0 + dv1, du1])
    fan = solve_riemann(m, ul, ur)
    assert np.array_equal(fan.u_minus, ul)
    assert np.allclose(fan.u_plus, ur, atol=1e-10)
    last = -math.inf
    for w in fan.waves:
        assert w.slowest >= last - 1e-10
        last = w.fastest
        if w.kind is WaveKind.SHOCK and w.strength != 0:
            assert np.max(np.abs(rh_residual(m, w.left_state, w.right_state, w.speed))) < TOL_RH
            assert lax_admissible_family(m, w.left_state, w.right_state, w.speed) == w.family
    assert np.allclose(sample_fan(fan, -10.0), ul)
    assert np.allclose(sample_fan(fan, 10.0), ur, atol=1e-10)


@given(small, small)
def test_fan_dict_roundtrip(dv, du):
    m = get_model("p-system")
    fan = solve_riemann(m, [1.0, 0.0], [1.0 + dv, du])
    back = fan_from_dict(fan_to_dict(fan), m)
    assert fan_to_dict(back) == fan_to_dict(fan)
    for xi in (-2.0, -1.1, 0.0, 1.1, 2.0):
        assert np.allclose(sample_fan(back, xi), sample_fan(fan, xi), atol=1e-10)
