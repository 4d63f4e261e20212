import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conslaw import get_model
from conslaw.errors import DomainViolation, NonPositiveGap, NotAdmissible, ShootingFailure, StabilityViolation
from conslaw.riemann import shock_speed
from conslaw.viscous import (
    PlaneCurve,
    ViscousParams,
    advection_diffusion_pair,
    area_potential,
    curve_length,
    grid_l1,
    l1_stability_check,
    max_stable_dt,
    parabolic_solve,
    profile_residual,
    profile_second_order_residual,
    swept_area_rate,
    transversal_potential,
    transversal_potential_bruteforce,
    traveling_wave_profile,
)


def test_constant_data_stays_constant(psys):
    sol = parabolic_solve(psys, lambda x: np.array([1.0, 0.2]), ViscousParams(0.05, (0.0, 1.0), 0.2))
    assert np.allclose(sol.values[-1], [1.0, 0.2], atol=1e-14)


def test_heat_equation_conserves_mass():
    m = get_model("advection", speed=0.0)
    bump = lambda x: np.array([math.exp(-((x - 0.5) / 0.05) ** 2)])
    sol = parabolic_solve(m, bump, ViscousParams(0.01, (0.0, 1.0), 0.2))
    assert sol.mass(len(sol.times) - 1)[0] == pytest.approx(sol.mass(0)[0], rel=1e-10)
    assert sol.values[-1].max() < sol.values[0].max()


@pytest.mark.parametrize("scheme", ["explicit", "semi_implicit"])
def test_max_principle(burgers, scheme):
    u0 = lambda x: np.array([1.0 if 0.2 < x < 0.6 else 0.0])
    sol = parabolic_solve(burgers, u0, ViscousParams(0.01, (0.0, 2.0), 0.5, scheme=scheme))
    for v in sol.values:
        assert v.min() >= -1e-12 and v.max() <= 1.0 + 1e-12


def test_schemes_agree(burgers):
    u0 = lambda x: np.array([math.exp(-((x - 0.5) / 0.1) ** 2)])
    a = parabolic_solve(burgers, u0, ViscousParams(0.02, (0.0, 2.0), 0.3))
    b = parabolic_solve(burgers, u0, ViscousParams(0.02, (0.0, 2.0), 0.3, scheme="semi_implicit"))
    assert grid_l1(a.values[-1], b.values[-1], a.dx) < 5e-3


def test_nonconservative_form_matches_for_smooth_data(burgers):
    u0 = lambda x: np.array([0.5 + 0.2 * math.exp(-((x - 0.5) / 0.1) ** 2)])
    a = parabolic_solve(burgers, u0, ViscousParams(0.02, (0.0, 2.0), 0.2))
    b = parabolic_solve(burgers, u0, ViscousParams(0.02, (0.0, 2.0), 0.2, form="nonconservative"))
    assert grid_l1(a.values[-1], b.values[-1], a.dx) < 5e-3
    assert b.meta["conservative"] is False


def test_unstable_step_rejected(burgers):
    eps, dx = 0.01, 0.005
    dt = 2 * max_stable_dt(dx, eps, 1.0)
    with pytest.raises(StabilityViolation):
        parabolic_solve(burgers, lambda x: np.array([1.0 if x < 0 else 0.0]), ViscousParams(eps, (-1.0, 1.0), 0.1, dx=dx, dt=dt))


def test_initial_data_outside_domain(psys):
    with pytest.raises(DomainViolation):
        parabolic_solve(psys, lambda x: np.array([-1.0, 0.0]), ViscousParams(0.05, (0.0, 1.0), 0.1))


def test_burgers_relaxes_to_traveling_wave(burgers):
    eps = 0.01
    sol = parabolic_solve(burgers, lambda x: np.array([1.0 if x < 0 else 0.0]), ViscousParams(eps, (-1.0, 2.0), 1.0))
    exact = 0.5 * (1 - np.tanh((sol.x_grid - 0.5) / (4 * eps)))
    assert grid_l1(sol.values[-1][:, 0], exact, sol.dx) < 0.02


def test_burgers_profile_is_tanh(burgers):
    eps = 0.05
    prof = traveling_wave_profile(burgers, 1, [1.0], 1.0, eps)
    assert prof.sigma == pytest.approx(0.5, abs=1e-12)
    xi = np.linspace(-0.8, 0.8, 161)
    exact = 0.5 * (1 - np.tanh(xi / (4 * eps)))
    assert np.max(np.abs(prof(xi)[:, 0] - exact)) < 1e-8


def test_zero_amplitude_profile_is_constant(burgers):
    prof = traveling_wave_profile(burgers, 1, [0.3], 0.0, 0.1)
    assert np.all(prof(np.linspace(-1, 1, 5)) == 0.3)


def test_negative_amplitude_not_admissible(burgers):
    with pytest.raises(NotAdmissible):
        traveling_wave_profile(burgers, 1, [0.3], -0.2, 0.1)


@pytest.mark.parametrize("family", [1, 2])
def test_psystem_profile(psys, family):
    u0 = np.array([1.0, 0.0])
    prof = traveling_wave_profile(psys, family, u0, 0.2, 0.05)
    assert prof.sigma == pytest.approx(shock_speed(psys, family, u0, -0.2), abs=1e-10)
    assert profile_residual(psys, prof) < 1e-6
    assert profile_second_order_residual(psys, prof) < 1e-4
    assert np.allclose(prof(np.array([-50.0]))[0], prof.u_minus, atol=1e-8)
    assert np.allclose(prof(np.array([50.0]))[0], prof.u_plus, atol=1e-8)


def test_middle_family_unsupported():
    m = get_model("linear", matrix=((-1.0, 0.0, 0.0), (0.0, 0.5, 0.0), (0.0, 0.0, 1.0)))
    with pytest.raises((ShootingFailure, NotAdmissible)):
        traveling_wave_profile(m, 2, [0.0, 0.0, 0.0], 0.1, 0.1)


def test_l1_stability_degenerate(burgers):
    u0 = lambda x: np.array([1.0 if x < 0 else 0.0])
    chk = l1_stability_check(burgers, u0, u0, 0.05, [0.1, 0.2], (-1.0, 2.0))
    assert chk.degenerate and chk.ratio == 0.0


def test_l1_contraction_for_burgers(burgers):
    u0 = lambda x: np.array([1.0 if x < 0 else 0.0])
    v0 = lambda x: np.array([0.8 if x < 0.1 else 0.1])
    chk = l1_stability_check(burgers, u0, v0, 0.05, [0.1, 0.3, 0.5], (-1.0, 2.0), L_claim=1.0 + 1e-6)
    assert not chk.degenerate
    assert chk.ratio <= 1.0 + 1e-6 and not chk.flagged


def test_transversal_point_masses():
    z = np.array([1.0, 0.0])
    assert transversal_potential(z, np.array([1.0, 0.0]), 2.0, 1.0) == pytest.approx(0.5)
    # fast mass one unit to the right: K(1) = exp(-1)
    assert transversal_potential(z, np.array([0.0, 1.0]), 2.0, 1.0) == pytest.approx(math.exp(-1) / 2)
    # fast mass to the left: K = 1
    assert transversal_potential(np.array([0.0, 1.0]), z, 2.0, 1.0) == pytest.approx(0.5)
    assert transversal_potential(np.zeros(3), np.ones(3), 1.0, 0.1) == 0.0
    with pytest.raises(NonPositiveGap):
        transversal_potential(z, z, 0.0, 1.0)
    with pytest.raises(NonPositiveGap):
        transversal_potential_bruteforce(z, z, -1.0, 1.0)


@given(
    st.lists(st.floats(-2, 2), min_size=1, max_size=40).flatmap(
        lambda a: st.tuples(st.just(a), st.lists(st.floats(-2, 2), min_size=len(a), max_size=len(a)))
    ),
    st.floats(0.1, 5.0),
    st.floats(0.01, 0.5),
)
def test_transversal_linear_time_matches_bruteforce(pair, c, dx):
    z, zs = pair
    fast = transversal_potential(z, zs, c, dx)
    slow = transversal_potential_bruteforce(z, zs, c, dx)
    assert fast == pytest.approx(slow, rel=1e-10, abs=1e-14)


def test_two_speed_potential_decreases():
    x = np.linspace(-3, 3, 301)
    dx = x[1] - x[0]
    z0 = np.exp(-((x + 1) ** 2) / 0.1)
    zs0 = np.exp(-((x - 1) ** 2) / 0.1)
    run = advection_diffusion_pair(z0, zs0, -0.5, 0.5, dx, 0.5)
    assert np.all(np.diff(run.potential) <= 1e-12)


def test_curve_length_of_unit_steps():
    # v = 1 on [0, 1], w = 1 on [1, 2] (dx = 1/100): length 2
    v = np.r_[np.ones(100), np.zeros(100)]
    w = np.r_[np.zeros(100), np.ones(100)]
    assert curve_length(PlaneCurve(v, w), 0.01) == pytest.approx(2.0)


def test_area_potential_cases():
    assert area_potential(PlaneCurve(np.array([1.0, 0.0]), np.array([0.0, 1.0])), 1.0) == pytest.approx(0.5)
    v = np.linspace(0, 1, 50)
    assert area_potential(PlaneCurve(v, 2 * v), 0.1) == 0.0
    big = np.random.default_rng(0).normal(size=(2, 300))
    c = PlaneCurve(*big)
    assert area_potential(c, 0.1, block=17) == pytest.approx(area_potential(c, 0.1, block=1000), rel=1e-12)


def test_swept_area_of_straight_curve_is_zero():
    v = np.linspace(0, 1, 50)
    assert swept_area_rate(PlaneCurve(v, 3 * v), 0.1, 0.01) == pytest.approx(0.0, abs=1e-12)
