import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conslaw import get_model
from conslaw.errors import CFLViolation
from conslaw.glimm import (
    GlimmParams,
    SeededUniform,
    VanDerCorput,
    error_rate_study,
    glimm_solve,
    make_sampler,
    piecewise_l1,
    van_der_corput,
    write_rate_csv,
)


def test_van_der_corput_prefix():
    assert [van_der_corput(k) for k in range(1, 8)] == [0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875]
    s = VanDerCorput()
    assert [s() for _ in range(3)] == [0.5, 0.25, 0.75]


def test_seeded_uniform_repeats():
    a, b = SeededUniform(7), SeededUniform(7)
    assert [a() for _ in range(5)] == [b() for _ in range(5)]
    with pytest.raises(ValueError):
        make_sampler("sobol")


def test_constant_data_is_preserved(psys):
    sol = glimm_solve(psys, lambda x: np.array([1.0, 0.1]), (0.0, 1.0), GlimmParams(0.05, 0.02, 0.5))
    assert all(np.all(v == np.array([1.0, 0.1])) for v in sol.values)


def test_cfl_violation(burgers):
    with pytest.raises(CFLViolation):
        glimm_solve(burgers, lambda x: np.array([2.0 if x < 0 else 0.0]), (-1.0, 1.0), GlimmParams(0.1, 0.1, 1.0))


def test_advection_step_lands_on_exact_position():
    # speed 1, dx/dt = 2: the jump sits on a half-cell edge and its L1 error stays O(dx)
    m = get_model("advection", speed=1.0)
    dx, t_end = 0.01, 0.5
    sol = glimm_solve(m, lambda x: np.array([1.0 if x < 0 else 0.0]), (-1.0, 2.0), GlimmParams(dx, dx / 2, t_end))
    exact = lambda xs: (np.asarray(xs) < t_end).astype(float)[:, None]
    err = piecewise_l1(sol.edges, sol.values[-1], exact, [t_end])
    assert err < 0.1
    assert set(np.unique(sol.values[-1])) <= {0.0, 1.0}


def test_burgers_shock_position(burgers):
    dx = 0.005
    sol = glimm_solve(burgers, lambda x: np.array([1.0 if x < 0 else 0.0]), (-1.0, 2.0), GlimmParams(dx, dx / 2, 1.0))
    jump = sol.x_grid[np.argmax(sol.values[-1][:, 0] < 0.5)]
    assert abs(jump - 0.5) < 0.1


def test_bit_reproducible(psys):
    u0 = lambda x: np.array([1.0, 0.0]) if x < 0.5 else np.array([1.1, 0.05])
    p = GlimmParams(0.02, 0.01, 0.3, sampler="uniform", seed=3)
    a, b = glimm_solve(psys, u0, (0.0, 1.0), p), glimm_solve(psys, u0, (0.0, 1.0), p)
    assert all(np.array_equal(x, y) for x, y in zip(a.values, b.values))


def test_mass_and_tv_accessors(burgers):
    sol = glimm_solve(burgers, lambda x: np.array([1.0 if 0 < x < 0.5 else 0.0]), (-1.0, 2.0), GlimmParams(0.01, 0.005, 0.2))
    assert sol.mass(0)[0] == pytest.approx(0.5, abs=0.021)  # nodes are 2 dx apart
    assert sol.total_variation(0) == pytest.approx(2.0)


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=12), st.floats(-0.5, 0.5))
def test_piecewise_l1_against_fine_quadrature(vals, shift):
    edges = np.linspace(0.0, 1.0, len(vals) + 1)
    values = np.array(vals)[:, None]
    other = lambda xs: np.where(np.asarray(xs) < 0.5 + 0.3 * shift, 1.0, -1.0)[:, None]
    exact = piecewise_l1(edges, values, other, [0.5 + 0.3 * shift])
    xs = (np.arange(200000) + 0.5) / 200000
    idx = np.minimum((xs * len(vals)).astype(int), len(vals) - 1)
    approx = np.mean(np.abs(values[idx, 0] - other(xs)[:, 0]))
    assert exact == pytest.approx(approx, abs=1e-4)


class _ExactRarefaction:
    def __init__(self, t):
        self.t = t
        self.positions = np.array([0.0, t])

    def sample(self, xs):
        return np.clip(np.asarray(xs) / self.t, 0.0, 1.0)[:, None]


def test_rate_study_single_row(tmp_path, burgers):
    rows = error_rate_study(
        burgers, lambda x: np.array([0.0 if x < 0 else 1.0]), [0.01], 2.0, 1.0, (-1.0, 2.0), _ExactRarefaction(1.0)
    )
    (r,) = rows
    assert r.dt == pytest.approx(0.005)
    assert r.rate_ratio == pytest.approx(r.L1_error / (math.sqrt(0.01) * abs(math.log(0.01))))
    assert r.L1_error < 0.1
    write_rate_csv(rows, tmp_path / "rate.csv")
    assert (tmp_path / "rate.csv").read_text().startswith("dx,dt,L1_error,rate_ratio")
