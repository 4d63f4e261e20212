import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conslaw import get_model
from conslaw.diagnostics import calibrate_C0, glimm_functional
from conslaw.errors import FrontCountExplosion, TotalVariationExceeded
from conslaw.fronts import l1_distance, sample_solution
from conslaw.front_tracking import (
    TrackingParams,
    discretize_initial,
    evolve,
    write_events_csv,
    write_fronts_csv,
)
from conslaw.riemann import WaveKind


def _run(model, breaks, states, t_end, eps_fan=0.05, **kw):
    init = discretize_initial(model, (breaks, states), mesh=1.0, tv_budget=10.0, eps_fan=eps_fan)
    return evolve(model, init, t_end, TrackingParams(eps_fan=eps_fan, **kw))


def test_two_burgers_shocks_merge(burgers):
    # 2|1 at x=0 (speed 1.5) and 1|0 at x=0.5 (speed 0.5) meet at t=0.5, x=0.75
    res = _run(burgers, [0.0, 0.5], [[2.0], [1.0], [0.0]], 1.0)
    (ev,) = res.events
    assert ev.time == pytest.approx(0.5, abs=1e-12)
    assert ev.position == pytest.approx(0.75, abs=1e-12)
    (out,) = ev.outgoing
    assert out.speed == pytest.approx(1.0, abs=1e-12)
    assert ev.delta_V == pytest.approx(0.0, abs=1e-12)
    assert ev.delta_Q == pytest.approx(-1.0, abs=1e-12)
    (f,) = res.state.fronts
    assert f.x(1.0) == pytest.approx(1.25, abs=1e-12)


def test_burgers_rarefaction_pieces(burgers):
    init = discretize_initial(burgers, ([0.0], [[0.0], [1.0]]), mesh=1.0, tv_budget=2.0, eps_fan=0.25)
    assert len(init.fronts) == 4
    assert all(f.kind is WaveKind.RAREFACTION_PIECE for f in init.fronts)
    assert [f.size for f in init.fronts] == pytest.approx([0.25] * 4)
    assert [f.speed for f in init.fronts] == pytest.approx([0.25, 0.5, 0.75, 1.0])


def test_tv_budget(burgers):
    with pytest.raises(TotalVariationExceeded):
        discretize_initial(burgers, ([0.0, 1.0], [[0.0], [1.0], [0.0]]), mesh=1.0, tv_budget=1.5)


def test_front_count_explosion(burgers):
    init = discretize_initial(burgers, ([0.0], [[0.0], [1.0]]), mesh=1.0, tv_budget=2.0, eps_fan=0.01)
    with pytest.raises(FrontCountExplosion):
        evolve(burgers, init, 1.0, TrackingParams(eps_fan=0.01, max_fronts=10))


def test_shock_only_mass_balance(burgers):
    # decreasing data: only shocks, so the discrete integral changes by boundary fluxes only
    states = [[1.0], [0.7], [0.5], [0.2], [0.0]]
    res = _run(burgers, [0.0, 0.3, 0.6, 1.0], states, 1.5)
    a, b = -1.0, 4.0
    xs = np.linspace(a, b, 200001)
    mid = 0.5 * (xs[1:] + xs[:-1])
    m0 = np.sum(res.solution.sample(0.0, mid)) * (b - a) / mid.size
    m1 = np.sum(res.solution.sample(1.5, mid)) * (b - a) / mid.size
    flux_in = 0.5 * 1.0**2 * 1.5
    assert m1 - m0 == pytest.approx(flux_in, abs=1e-4)
    assert all(f.kind is WaveKind.SHOCK for f in res.state.fronts)


def test_run_is_deterministic(psys):
    rng = np.random.default_rng(3)
    breaks = list(np.sort(rng.uniform(0, 2, 5)))
    states = [np.array([1.0, 0.0]) + rng.uniform(-0.05, 0.05, 2) for _ in range(6)]
    a = _run(psys, breaks, states, 2.0, eps_fan=0.02)
    b = _run(psys, breaks, states, 2.0, eps_fan=0.02)
    assert [(e.time, e.position) for e in a.events] == [(e.time, e.position) for e in b.events]
    assert np.array_equal(a.state.positions, b.state.positions)


def test_solution_sampling_matches_state(psys):
    res = _run(psys, [0.0, 0.5], [[1.0, 0.0], [1.05, 0.02], [0.98, -0.01]], 1.0, eps_fan=0.02)
    xs = np.linspace(-2, 3, 101)
    assert np.allclose(res.solution.sample(1.0, xs), sample_solution(res.state, xs))
    assert l1_distance(res.solution.state_at(1.0), res.state) < 1e-12


def test_writers(tmp_path, burgers):
    res = _run(burgers, [0.0, 0.5], [[2.0], [1.0], [0.0]], 1.0)
    write_fronts_csv(res.state, tmp_path / "f.csv")
    write_events_csv(res.events, tmp_path / "e.csv")
    rows = (tmp_path / "f.csv").read_text().splitlines()
    assert len(rows) == 2
    assert len((tmp_path / "e.csv").read_text().splitlines()) == 2


@given(st.integers(0, 10_000))
def test_invariants_on_random_psystem_data(seed):
    m = get_model("p-system")
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 5))
    breaks = list(np.sort(rng.uniform(0, 2, k)))
    states = [np.array([1.0, 0.0]) + rng.uniform(-0.06, 0.06, 2) for _ in range(k + 1)]
    res = _run(m, breaks, states, 1.5, eps_fan=0.03)
    res.state.check(tol=1e-9)
    C0 = calibrate_C0(m, [res])
    for e in res.events:
        assert e.delta_V + C0 * e.delta_Q <= 1e-9
    ups = [v + C0 * q for v, q in zip(res.trace.V, res.trace.Q)]
    assert np.all(np.diff(ups) <= 1e-9)
    assert glimm_functional(res.state, C0) <= ups[0] + 1e-9
