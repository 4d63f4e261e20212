"""Wave functionals and verification estimates for front-tracking solutions.

Total strength ``V``, interaction potential ``Q`` and the Glimm functional
``V + C0 Q``; the weighted stability functional ``Phi(u, v)``; the weak-form
residual; and the local integral estimates comparing a solution with the
Riemann fan and with frozen-coefficient linear transport.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import CalibrationFailed
from .fronts import Front, FrontState, sample_solution
from .hyperbolic_system import SystemModel, eigen_decompose
from .riemann import sample_fan, shock_components, solve_riemann

TOL_GLIMM_FUNCTIONAL = 1e-9


@dataclass(frozen=True)
class ApproachingPairPolicy:
    """Which ordered pairs of fronts (left, right) count as approaching.

    A pair is approaching when the left front belongs to a higher family, or
    both share a family and at least one of them is a shock.  Shocks only
    occur in genuinely nonlinear families, so no model lookup is needed.
    Non-physical fronts carry family ``n + 1``.  Subclass and override
    :meth:`pair_mask` to experiment with other rules.
    """

    def pair_mask(self, fam_l, shock_l, fam_r, shock_r):
        fam_l, fam_r = np.asarray(fam_l), np.asarray(fam_r)
        same = fam_l == fam_r
        return (fam_l > fam_r) | (same & (np.asarray(shock_l) | np.asarray(shock_r)))

    def approaching(self, left: Front, right: Front) -> bool:
        return bool(self.pair_mask(left.family, left.is_shock, right.family, right.is_shock))


DEFAULT_POLICY = ApproachingPairPolicy()


def _arrays(fronts: Sequence[Front]):
    fam = np.array([f.family for f in fronts], dtype=int)
    shock = np.array([f.is_shock for f in fronts], dtype=bool)
    size = np.array([f.size for f in fronts], dtype=float)
    return fam, shock, size


def total_strength(state: FrontState) -> float:
    return float(sum(f.size for f in state.fronts))


def interaction_potential(state: FrontState, policy: ApproachingPairPolicy = DEFAULT_POLICY) -> float:
    """Sum of ``|sigma_a sigma_b|`` over approaching pairs (fronts taken in position order)."""
    return pair_sum(state.fronts, policy)


def pair_sum(fronts: Sequence[Front], policy: ApproachingPairPolicy = DEFAULT_POLICY, block: int = 1024) -> float:
    if len(fronts) < 2:
        return 0.0
    fam, shock, size = _arrays(fronts)
    total = 0.0
    for s in range(0, len(fronts), block):
        e = min(len(fronts), s + block)
        # rows s..e-1 against every front to their right
        mask = policy.pair_mask(fam[s:e, None], shock[s:e, None], fam[None, s:], shock[None, s:])
        mask = np.triu(mask, k=1)
        total += float(np.sum(mask * np.outer(size[s:e], size[s:])))
    return total


def cross_sum(left: Sequence[Front], right: Sequence[Front], policy: ApproachingPairPolicy = DEFAULT_POLICY) -> float:
    """Approaching-pair sum between two groups with every ``left`` front left of every ``right`` front."""
    if not left or not right:
        return 0.0
    fl, sl, zl = _arrays(left)
    fr, sr, zr = _arrays(right)
    mask = policy.pair_mask(fl[:, None], sl[:, None], fr[None, :], sr[None, :])
    return float(np.sum(mask * np.outer(zl, zr)))


def glimm_functional(state: FrontState, C0: float, policy: ApproachingPairPolicy = DEFAULT_POLICY) -> float:
    if C0 <= 0:
        raise ValueError("C0 must be positive")
    return total_strength(state) + C0 * interaction_potential(state, policy)


@dataclass
class FunctionalTrace:
    t: List[float] = field(default_factory=list)
    V: List[float] = field(default_factory=list)
    Q: List[float] = field(default_factory=list)
    Upsilon: List[float] = field(default_factory=list)
    Phi: List[Optional[float]] = field(default_factory=list)
    event: List[bool] = field(default_factory=list)

    def append(self, t, V, Q, C0, event=False, Phi=None):
        self.t.append(float(t))
        self.V.append(float(V))
        self.Q.append(float(Q))
        self.Upsilon.append(float(V + C0 * Q))
        self.Phi.append(Phi)
        self.event.append(bool(event))

    def __len__(self):
        return len(self.t)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "V", "Q", "Upsilon", "Phi"])
            for row in zip(self.t, self.V, self.Q, self.Upsilon, self.Phi):
                w.writerow([_fmt(x) for x in row])


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


# ----------------------------------------------------------- calibration


C0_GRID = tuple(2.0**k for k in range(21))


def calibrate_C0(model: Optional[SystemModel], trial_runs, tol: float = TOL_GLIMM_FUNCTIONAL, grid=C0_GRID) -> float:
    """Smallest ``C0`` on the grid ``{1, 2, ..., 2**20}`` keeping ``V + C0 Q`` non-increasing.

    ``trial_runs`` is a sequence of event lists (as returned by
    :func:`conslaw.front_tracking.evolve`) or of objects with an ``events``
    attribute.
    """
    deltas = []
    for run in trial_runs:
        events = getattr(run, "events", run)
        deltas.extend((e.delta_V, e.delta_Q) for e in events)
    if not trial_runs:
        raise CalibrationFailed("no trial runs supplied")
    dV = np.array([d[0] for d in deltas])
    dQ = np.array([d[1] for d in deltas])
    for C0 in grid:
        if dV.size == 0 or np.all(dV + C0 * dQ <= tol):
            return float(C0)
    raise CalibrationFailed(f"no C0 in [1, {grid[-1]:g}] makes V + C0 Q non-increasing")


# ---------------------------------------------------- stability functional


def _fictitious_approach(pos, fam, speed, size, x: float, i: int, lam_i: float, ld_family: bool) -> float:
    """Total size of fronts approaching a fictitious ``i``-shock at ``x`` with speed ``lam_i``."""
    left = pos < x
    right = pos > x
    same = fam == i
    if ld_family:
        mask = (left & (fam > i)) | (right & (fam < i))
    else:
        mask = (left & ((fam > i) | (same & (speed > lam_i)))) | (right & ((fam < i) | (same & (speed < lam_i))))
    return float(size[mask].sum())


@dataclass(frozen=True)
class StabilityParts:
    """``Phi = base + kappa1 * approach + kappa2 * potential * base``."""

    base: float  # sum_i int |q_i| dx
    approach: float  # sum_i int V_i |q_i| dx
    potential: float  # Q(u) + Q(v)

    def phi(self, kappa1: float, kappa2: float) -> float:
        return self.base + kappa1 * self.approach + kappa2 * self.potential * self.base


def stability_parts(
    model: SystemModel,
    u: FrontState,
    v: FrontState,
    policy: ApproachingPairPolicy = DEFAULT_POLICY,
    window=None,
    cache: Optional[dict] = None,
) -> StabilityParts:
    """Components of the weighted functional; ``cache`` memoises shock decompositions."""
    u = _at_own_time(u)
    v = _at_own_time(v)
    pts = np.concatenate([u.positions, v.positions])
    if window is None:
        if not np.allclose(u.left_boundary_state, v.left_boundary_state, atol=1e-14) or not np.allclose(
            u.right_boundary_state, v.right_boundary_state, atol=1e-14
        ):
            raise ValueError("profiles differ at infinity; pass a finite window")
        if pts.size == 0:
            return StabilityParts(0.0, 0.0, 0.0)
        a, b = float(pts.min()), float(pts.max())
    else:
        a, b = map(float, window)
    qsum = interaction_potential(u, policy) + interaction_potential(v, policy)
    grid = np.unique(np.clip(np.concatenate([[a, b], pts]), a, b))
    if grid.size < 2:
        return StabilityParts(0.0, 0.0, qsum)
    mids = 0.5 * (grid[1:] + grid[:-1])
    widths = np.diff(grid)
    uu = sample_solution(u, mids)
    vv = sample_solution(v, mids)
    all_fronts = list(u.fronts) + list(v.fronts)
    pos = np.array([f.position for f in all_fronts])
    fam = np.array([f.family for f in all_fronts])
    spd = np.array([f.speed for f in all_fronts])
    size = np.array([f.size for f in all_fronts])
    ld = [model.is_ld(i) for i in range(model.n)]
    cache = {} if cache is None else cache
    base = approach = 0.0
    for k in range(mids.size):
        if np.array_equal(uu[k], vv[k]):
            continue
        key = (uu[k].tobytes(), vv[k].tobytes())
        sc = cache.get(key)
        if sc is None:
            sc = cache[key] = shock_components(model, uu[k], vv[k])
        for i in range(model.n):
            qi = abs(float(sc.q[i]))
            if qi == 0.0:
                continue
            Vi = _fictitious_approach(pos, fam, spd, size, mids[k], i + 1, float(sc.speeds[i]), ld[i])
            base += qi * widths[k]
            approach += Vi * qi * widths[k]
    return StabilityParts(base, approach, qsum)


def stability_functional(
    model: SystemModel,
    u: FrontState,
    v: FrontState,
    kappa1: float,
    kappa2: float,
    policy: ApproachingPairPolicy = DEFAULT_POLICY,
    window=None,
    return_parts: bool = False,
):
    """Weighted L1-equivalent distance ``sum_i int W_i |q_i| dx``.

    The integrand is piecewise constant on the common refinement of the two
    front sets, so the integral is a finite sum.  Outside the fronts the two
    profiles must coincide unless a finite ``window`` is given.  With
    ``return_parts`` the unweighted integral is returned as well.
    """
    parts = stability_parts(model, u, v, policy, window)
    phi = parts.phi(kappa1, kappa2)
    return (phi, parts.base) if return_parts else phi


KAPPA_GRID = tuple(2.0**k for k in range(13))


def phi_increase(series: Sequence[StabilityParts], kappa1: float, kappa2: float) -> float:
    """Largest ``Phi(t) - Phi(s)`` over ``s < t`` along a time-ordered series."""
    phi = np.array([p.phi(kappa1, kappa2) for p in series])
    if phi.size < 2:
        return 0.0
    return float(np.max(phi[1:] - np.minimum.accumulate(phi)[:-1]))


def calibrate_kappas(series: Sequence[Sequence[StabilityParts]], rel_tol: float, grid=KAPPA_GRID):
    """Smallest ``(kappa1, kappa2)`` on the grid with ``Phi`` non-increasing up to ``rel_tol * Phi(0)``.

    Candidates are ordered by ``kappa1 + kappa2``, then ``kappa1``.  Each
    entry of ``series`` is a time-ordered list of :class:`StabilityParts`.
    """
    if not series:
        raise CalibrationFailed("no trial series supplied")
    cands = sorted(((k1, k2) for k1 in grid for k2 in grid), key=lambda p: (p[0] + p[1], p[0]))
    for k1, k2 in cands:
        if all(phi_increase(s, k1, k2) <= rel_tol * s[0].phi(k1, k2) for s in series):
            return float(k1), float(k2)
    raise CalibrationFailed("no (kappa1, kappa2) on the grid keeps Phi non-increasing")


def _at_own_time(state: FrontState) -> FrontState:
    return FrontState(state.time, [f.at(state.time) for f in state.fronts], state.left_boundary_state, state.n_families)


# ------------------------------------------------------------- weak form


@dataclass(frozen=True)
class BumpTestFunction:
    """``phi(t, x) = psi((t - t0)/rt) psi((x - x0)/rx)`` with ``psi(s) = (1 - s^2)^3`` on ``|s| < 1``.

    C^2 with compact support ``[t0 - rt, t0 + rt] x [x0 - rx, x0 + rx]``.
    """

    t0: float
    rt: float
    x0: float
    rx: float

    @staticmethod
    def _psi(s):
        s = np.asarray(s, dtype=float)
        return np.where(np.abs(s) < 1, (1 - s * s) ** 3, 0.0)

    @staticmethod
    def _dpsi(s):
        s = np.asarray(s, dtype=float)
        return np.where(np.abs(s) < 1, -6 * s * (1 - s * s) ** 2, 0.0)

    def phi(self, t, x):
        return self._psi((t - self.t0) / self.rt) * self._psi((x - self.x0) / self.rx)

    def phi_t(self, t, x):
        return self._dpsi((t - self.t0) / self.rt) / self.rt * self._psi((x - self.x0) / self.rx)

    def phi_x(self, t, x):
        return self._psi((t - self.t0) / self.rt) * self._dpsi((x - self.x0) / self.rx) / self.rx

    @property
    def t_support(self):
        return self.t0 - self.rt, self.t0 + self.rt

    @property
    def x_support(self):
        return self.x0 - self.rx, self.x0 + self.rx


def random_test_functions(rng: np.random.Generator, count: int, t_range, x_range) -> List[BumpTestFunction]:
    """Bumps supported strictly inside ``]t_range[ x ]x_range[``."""
    out = []
    t_lo, t_hi = t_range
    x_lo, x_hi = x_range
    for _ in range(count):
        rt = rng.uniform(0.15, 0.45) * (t_hi - t_lo)
        t0 = rng.uniform(t_lo + rt * 1.01, t_hi - rt * 1.01)
        rx = rng.uniform(0.1, 0.4) * (x_hi - x_lo)
        x0 = rng.uniform(x_lo + rx * 1.01, x_hi - rx * 1.01)
        out.append(BumpTestFunction(t0, rt, x0, rx))
    return out


@dataclass(frozen=True)
class WeakResidual:
    value: np.ndarray  # residual vector (one entry per conserved component)
    error_estimate: float

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.value)))


def weak_form_residual(
    sampler: Callable,
    model: SystemModel,
    test_functions: Sequence,
    breakpoints: Optional[Callable] = None,
    t_panels: int = 64,
    x_nodes: int = 400,
    order: int = 6,
) -> List[WeakResidual]:
    """Quadrature of ``int int [u phi_t + f(u) phi_x] dx dt`` for each test function.

    ``sampler(t, xs)`` returns the states ``(len(xs), n)`` at time ``t``.  If
    ``breakpoints(t)`` is supplied (positions of the jumps at time ``t``),
    the x-integral is computed with Gauss-Legendre panels between jumps,
    which is exact to rounding for piecewise-constant profiles.  Otherwise a
    composite midpoint rule with ``x_nodes`` points is used.  The error
    estimate compares against the same rule with half as many time panels.
    """
    gx, gw = np.polynomial.legendre.leggauss(order)
    out = []
    for tf in test_functions:
        full = _weak_integral(sampler, model, tf, breakpoints, t_panels, x_nodes, gx, gw)
        half = _weak_integral(sampler, model, tf, breakpoints, max(1, t_panels // 2), max(2, x_nodes // 2), gx, gw)
        out.append(WeakResidual(full, float(np.max(np.abs(full - half)))))
    return out


def _weak_integral(sampler, model, tf, breakpoints, t_panels, x_nodes, gx, gw):
    t_lo, t_hi = tf.t_support
    x_lo, x_hi = tf.x_support
    tb = np.linspace(t_lo, t_hi, t_panels + 1)
    total = np.zeros(model.n)
    flux = _vector_flux(model)
    for p in range(t_panels):
        a, b = tb[p], tb[p + 1]
        for node, weight in zip(gx, gw):
            t = 0.5 * (a + b) + 0.5 * (b - a) * node
            wt = 0.5 * (b - a) * weight
            if breakpoints is not None:
                cuts = np.asarray(breakpoints(t), dtype=float)
                cuts = cuts[(cuts > x_lo) & (cuts < x_hi)]
                edges = np.concatenate([[x_lo], np.sort(cuts), [x_hi]])
                lo, hi = edges[:-1], edges[1:]
                keep = hi > lo
                lo, hi = lo[keep], hi[keep]
                xs = (0.5 * (lo + hi))[:, None] + 0.5 * (hi - lo)[:, None] * gx[None, :]
                wx = (0.5 * (hi - lo))[:, None] * gw[None, :]
                xs, wx = xs.ravel(), wx.ravel()
            else:
                edges = np.linspace(x_lo, x_hi, x_nodes + 1)
                xs = 0.5 * (edges[1:] + edges[:-1])
                wx = np.full(xs.size, edges[1] - edges[0])
            us = np.asarray(sampler(t, xs), dtype=float).reshape(xs.size, model.n)
            fs = flux(us)
            integrand = us * tf.phi_t(t, xs)[:, None] + fs * tf.phi_x(t, xs)[:, None]
            total += wt * (wx @ integrand)
    return total


def _vector_flux(model: SystemModel):
    def flux(us):
        return np.array([model.f(u) for u in us]).reshape(us.shape)

    return flux


# ---------------------------------------------- local viscosity estimates


def local_riemann_estimate(
    solution, model: SystemModel, tau: float, xi: float, h_list: Sequence[float], beta_prime: float, nodes: int = 2000
) -> np.ndarray:
    """``(1/h) int_{|x - xi| <= beta' h} |u(tau + h, x) - U#(h, x - xi)| dx`` for each ``h``.

    ``solution`` must provide ``sample(t, xs)`` and ``one_sided(t, x)``
    returning the left and right limits at ``x``.
    """
    u_minus, u_plus = solution.one_sided(tau, xi)
    fan = solve_riemann(model, u_minus, u_plus)
    out = []
    for h in h_list:
        edges = np.linspace(xi - beta_prime * h, xi + beta_prime * h, nodes + 1)
        xs = 0.5 * (edges[1:] + edges[:-1])
        dx = edges[1] - edges[0]
        us = solution.sample(tau + h, xs)
        ref = np.array([sample_fan(fan, (x - xi) / h) for x in xs])
        out.append(float(np.sum(np.abs(us - ref)) * dx / h))
    return np.array(out)


@dataclass(frozen=True)
class LinearEstimate:
    h: float
    value: float
    tv: float
    bound: float
    holds: bool

    @property
    def ratio(self) -> float:
        return self.value / self.tv**2 if self.tv > 0 else 0.0


def frozen_transport(model: SystemModel, sampler0: Callable, u_hat, h: float, xs: np.ndarray) -> np.ndarray:
    """Exact solution at time ``h`` of ``w_t + A(u_hat) w_x = 0``, ``w(0) = sampler0``."""
    es = eigen_decompose(model, u_hat, check_domain=False)
    out = np.zeros((xs.size, model.n))
    for i in range(model.n):
        w0 = np.asarray(sampler0(xs - es.lambdas[i] * h)).reshape(xs.size, model.n)
        out += np.outer(w0 @ es.l(i), es.r(i))
    return out


def local_linear_estimate(
    solution,
    model: SystemModel,
    tau: float,
    interval,
    xi: float,
    h_list: Sequence[float],
    beta: float,
    C_claim: float,
    nodes: int = 4000,
) -> List[LinearEstimate]:
    """Compare ``u(tau + h)`` with frozen-coefficient transport of ``u(tau)`` on ``(a + beta h, b - beta h)``."""
    a, b = interval
    u_hat = solution.sample(tau, np.array([xi]))[0]
    tv = solution.total_variation(tau, a, b)
    out = []
    for h in h_list:
        lo, hi = a + beta * h, b - beta * h
        if hi <= lo:
            raise ValueError(f"h={h} too large for the interval with beta={beta}")
        edges = np.linspace(lo, hi, nodes + 1)
        xs = 0.5 * (edges[1:] + edges[:-1])
        dx = edges[1] - edges[0]
        us = solution.sample(tau + h, xs)
        ref = frozen_transport(model, lambda y: solution.sample(tau, y), u_hat, h, xs)
        val = float(np.sum(np.abs(us - ref)) * dx / h)
        bound = C_claim * tv**2
        out.append(LinearEstimate(float(h), val, tv, bound, val <= bound + 1e-14))
    return out


def instantaneous_error_rate(solution, model: SystemModel, t: float, h: float, window, reference_solver: Callable) -> float:
    """``||w(t + h) - S_h w(t)||_L1 / h`` at a fixed small ``h``.

    ``reference_solver(state, h)`` must return a sampler for ``S_h w(t)``.
    """
    a, b = window
    xs = np.linspace(a, b, 4001)
    xs = 0.5 * (xs[1:] + xs[:-1])
    dx = xs[1] - xs[0]
    w = solution.sample(t + h, xs)
    s = reference_solver(solution.state_at(t), h)(xs)
    return float(np.sum(np.abs(w - s)) * dx / h)


def measured_constant(values: Sequence[float]) -> float:
    vals = [v for v in values if math.isfinite(v)]
    return max(vals) if vals else math.nan
