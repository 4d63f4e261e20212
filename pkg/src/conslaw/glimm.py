"""Glimm random-choice scheme on a staggered grid.

The profile is stored on half-cells ``[x_j, x_j + dx)``.  At step ``k`` the
profile is constant on cells of width ``2 dx`` centred at nodes of parity
``k mod 2``; Riemann problems sit at the remaining nodes and waves travel at
most ``dx`` during one step when ``dt * sup|lambda| <= dx``, so neighbouring
fans never meet.  The new cell value is the exact fan sampled at the offset
``(2 theta - 1) dx`` from the node, ``theta`` in (0, 1).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence

import numpy as np

from .errors import CFLViolation
from .hyperbolic_system import SystemModel, _eigenvalues
from .riemann import sample_fan, solve_riemann


def van_der_corput(k: int, base: int = 2) -> float:
    """k-th element (k >= 1) of the van der Corput sequence."""
    q, denom = 0.0, 1.0
    while k:
        k, digit = divmod(k, base)
        denom *= base
        q += digit / denom
    return q


class VanDerCorput:
    def __init__(self, base: int = 2):
        self.base = base
        self.k = 0

    def __call__(self) -> float:
        self.k += 1
        return van_der_corput(self.k, self.base)


class SeededUniform:
    def __init__(self, seed: int = 0):
        self.rng = np.random.default_rng(seed)

    def __call__(self) -> float:
        theta = 0.0
        while theta == 0.0:
            theta = float(self.rng.uniform())
        return theta


def make_sampler(name: str, seed: int = 0):
    if name in ("vdc", "VanDerCorput", "van_der_corput"):
        return VanDerCorput()
    if name in ("uniform", "SeededUniform", "seeded_uniform"):
        return SeededUniform(seed)
    raise ValueError(f"unknown sampler {name!r}")


@dataclass
class GlimmParams:
    dx: float
    dt: float
    t_end: float
    sampler: str = "vdc"
    seed: int = 0
    store_every: int = 1

    @property
    def cfl(self) -> float:
        return self.dx / self.dt


@dataclass
class GridSolution:
    """Time-indexed profiles, piecewise constant on the cells ``[x_j - dx/2, x_j + dx/2)``."""

    times: List[float]
    x_grid: np.ndarray  # cell midpoints, uniform spacing dx
    values: List[np.ndarray]  # each (len(x_grid), n)
    dx: float
    meta: dict = field(default_factory=dict)

    @property
    def edges(self) -> np.ndarray:
        return np.concatenate([self.x_grid - 0.5 * self.dx, [self.x_grid[-1] + 0.5 * self.dx]])

    def at(self, t: float) -> np.ndarray:
        k = int(np.argmin(np.abs(np.asarray(self.times) - t)))
        return self.values[k]

    def total_variation(self, k: int) -> float:
        v = self.values[k]
        return float(np.sum(np.linalg.norm(np.diff(v, axis=0), axis=1)))

    def mass(self, k: int) -> np.ndarray:
        return self.values[k].sum(axis=0) * self.dx

    def sampler(self, k: int) -> Callable:
        """Right-continuous piecewise-constant evaluation of slice ``k``."""
        vals = self.values[k]
        edges = self.edges

        def f(xs):
            idx = np.clip(np.searchsorted(edges, np.asarray(xs, dtype=float), side="right") - 1, 0, len(vals) - 1)
            return vals[idx]

        return f

    def write_csv(self, path, every: int = 1) -> None:
        n = self.values[0].shape[1]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "x"] + [f"u_{i + 1}" for i in range(n)])
            for k in range(0, len(self.times), every):
                for x, u in zip(self.x_grid, self.values[k]):
                    w.writerow([repr(float(self.times[k])), repr(float(x))] + [repr(float(c)) for c in u])


def _max_speed(model: SystemModel, states: np.ndarray) -> float:
    uniq = np.unique(states, axis=0)
    return max(float(np.max(np.abs(_eigenvalues(model, u)))) for u in uniq)


def glimm_solve(model: SystemModel, u_bar: Callable, x_range, params: GlimmParams) -> GridSolution:
    """Run the random-choice scheme on ``x_range`` (constant extension outside)."""
    a, b = x_range
    dx, dt = params.dx, params.dt
    ncell = int(round((b - a) / dx))
    nodes = a + dx * np.arange(ncell + 1)
    # initial cells centred at even nodes
    H = np.empty((ncell, model.n))
    for c in range(0, ncell + 1, 2):
        val = np.atleast_1d(np.asarray(u_bar(nodes[c]), dtype=float))
        if c - 1 >= 0:
            H[c - 1] = val
        if c < ncell:
            H[c] = val
    sampler = make_sampler(params.sampler, params.seed)
    steps = int(round(params.t_end / dt))
    times, values = [0.0], [H.copy()]
    cache = {}
    for k in range(steps):
        smax = _max_speed(model, H)
        if smax * dt > dx * (1 + 1e-12):
            raise CFLViolation(f"dt*sup|lambda| = {smax * dt:.4g} > dx = {dx:.4g} at step {k}")
        theta = sampler()
        xi = (2.0 * theta - 1.0) * dx / dt
        # interior jump nodes of the new parity
        m = np.arange(1, ncell, 2) if (k + 1) % 2 else np.arange(2, ncell, 2)
        L, R = H[m - 1], H[m]
        diff = np.any(L != R, axis=1)
        newH = H.copy()
        for idx in np.nonzero(diff)[0]:
            node = m[idx]
            key = (L[idx].tobytes(), R[idx].tobytes())
            fan = cache.get(key)
            if fan is None:
                fan = solve_riemann(model, L[idx], R[idx])
                cache[key] = fan
            val = sample_fan(fan, xi)
            newH[node - 1] = val
            newH[node] = val
        H = newH
        if (k + 1) % params.store_every == 0 or k + 1 == steps:
            times.append((k + 1) * dt)
            values.append(H.copy())
        if len(cache) > 200_000:
            cache.clear()
    x_mid = a + dx * (np.arange(ncell) + 0.5)
    return GridSolution(times, x_mid, values, dx, {"scheme": "glimm", "sampler": params.sampler})


def piecewise_l1(edges: np.ndarray, values: np.ndarray, other: Callable, other_breaks: Sequence[float], window=None) -> float:
    """Exact L1 distance between a cell profile and another piecewise-constant profile."""
    lo, hi = (edges[0], edges[-1]) if window is None else window
    pts = np.concatenate([edges, np.asarray(other_breaks, dtype=float), [lo, hi]])
    grid = np.unique(np.clip(pts, lo, hi))
    mids = 0.5 * (grid[1:] + grid[:-1])
    idx = np.clip(np.searchsorted(edges, mids, side="right") - 1, 0, len(values) - 1)
    mine = values[idx]
    theirs = np.asarray(other(mids)).reshape(mine.shape)
    return float(np.sum(np.sum(np.abs(mine - theirs), axis=1) * np.diff(grid)))


@dataclass(frozen=True)
class RateRow:
    dx: float
    dt: float
    L1_error: float
    rate_ratio: float


def error_rate_study(
    model: SystemModel,
    u_bar: Callable,
    mesh_list: Sequence[float],
    fixed_ratio: float,
    t_end: float,
    x_range,
    reference,
    sampler: str = "vdc",
    seed: int = 0,
    window=None,
) -> List[RateRow]:
    """L1 error of the Glimm solution at ``t_end`` for each ``dx`` with ``dx/dt = fixed_ratio``.

    ``reference`` is a :class:`~conslaw.fronts.FrontState` at ``t_end`` (for
    example a fine front-tracking run) or any object with ``positions`` and
    a ``sample(xs)`` method.
    """
    from .fronts import FrontState, sample_solution

    if isinstance(reference, FrontState):
        ref_sample = lambda xs: sample_solution(reference, xs)
        ref_breaks = reference.positions
    else:
        ref_sample, ref_breaks = reference.sample, reference.positions
    rows = []
    for dx in mesh_list:
        dt = dx / fixed_ratio
        sol = glimm_solve(model, u_bar, x_range, GlimmParams(dx, dt, t_end, sampler, seed, store_every=10**9))
        err = piecewise_l1(sol.edges, sol.values[-1], ref_sample, ref_breaks, window)
        rows.append(RateRow(float(dx), float(dt), err, err / (math.sqrt(dx) * abs(math.log(dx)))))
    return rows


def write_rate_csv(rows: Sequence[RateRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dx", "dt", "L1_error", "rate_ratio"])
        for r in rows:
            w.writerow([repr(r.dx), repr(r.dt), repr(r.L1_error), repr(r.rate_ratio)])
