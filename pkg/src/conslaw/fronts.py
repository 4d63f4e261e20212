"""Piecewise-constant profiles represented as ordered discontinuity fronts."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List

import numpy as np

from .riemann import WaveKind


@dataclass(eq=False)
class Front:
    position: float  # valid at time t_ref
    family: int  # 1..n, n + 1 for non-physical fronts
    kind: WaveKind
    left_state: np.ndarray
    right_state: np.ndarray
    speed: float
    strength: float
    generation: int = 0
    t_ref: float = 0.0
    uid: int = -1
    t_birth: float = 0.0
    t_death: float = math.inf

    def x(self, t: float) -> float:
        return self.position + self.speed * (t - self.t_ref)

    @property
    def is_shock(self) -> bool:
        return self.kind is WaveKind.SHOCK

    @property
    def nonphysical(self) -> bool:
        return self.kind is WaveKind.NONPHYSICAL

    @property
    def size(self) -> float:
        """|sigma| for physical fronts, the jump norm for non-physical ones."""
        if self.nonphysical:
            return float(np.linalg.norm(self.right_state - self.left_state))
        return abs(self.strength)

    def at(self, t: float) -> "Front":
        return replace(self, position=self.x(t), t_ref=t)


@dataclass
class FrontState:
    time: float
    fronts: List[Front]
    left_boundary_state: np.ndarray
    n_families: int = field(default=0)

    def __post_init__(self):
        self.left_boundary_state = np.atleast_1d(np.asarray(self.left_boundary_state, dtype=float))
        if not self.n_families:
            self.n_families = self.left_boundary_state.size

    @property
    def right_boundary_state(self) -> np.ndarray:
        return self.fronts[-1].right_state if self.fronts else self.left_boundary_state

    @property
    def positions(self) -> np.ndarray:
        return np.array([f.x(self.time) for f in self.fronts])

    def check(self, tol: float = 1e-12) -> None:
        """Raise ``AssertionError`` when ordering or state matching is broken."""
        prev = self.left_boundary_state
        last_x = -math.inf
        for f in self.fronts:
            x = f.x(self.time)
            assert x >= last_x - tol, "fronts out of order"
            assert np.allclose(f.left_state, prev, atol=tol, rtol=0), "state mismatch between fronts"
            prev, last_x = f.right_state, x

    def states(self) -> list:
        return [self.left_boundary_state] + [f.right_state for f in self.fronts]


def sample_solution(state: FrontState, x) -> np.ndarray:
    """Right-continuous evaluation of the piecewise-constant profile.

    ``x`` may be a scalar (returns a state vector) or an array (returns
    ``(len(x), n)``).
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    table = np.vstack(state.states())
    idx = np.searchsorted(state.positions, xs, side="right") if state.fronts else np.zeros(xs.size, dtype=int)
    out = table[idx]
    return out[0] if np.ndim(x) == 0 else out


def l1_distance(u: FrontState, v: FrontState, window=None) -> float:
    """Exact L1 distance between two piecewise-constant profiles.

    Outside the fronts both profiles must agree unless a finite ``window``
    is given.
    """
    pts = np.concatenate([u.positions, v.positions])
    if window is None:
        if not np.allclose(u.left_boundary_state, v.left_boundary_state, atol=1e-14) or not np.allclose(
            u.right_boundary_state, v.right_boundary_state, atol=1e-14
        ):
            raise ValueError("profiles differ at infinity; pass a finite window")
        if pts.size == 0:
            return 0.0
        a, b = float(pts.min()), float(pts.max())
    else:
        a, b = window
    grid = np.unique(np.clip(np.concatenate([[a, b], pts]), a, b))
    if grid.size < 2:
        return 0.0
    mids = 0.5 * (grid[1:] + grid[:-1])
    du = sample_solution(u, mids) - sample_solution(v, mids)
    return float(np.sum(np.sum(np.abs(du), axis=1) * np.diff(grid)))


def total_variation(state: FrontState) -> float:
    return float(sum(np.linalg.norm(f.right_state - f.left_state) for f in state.fronts))
