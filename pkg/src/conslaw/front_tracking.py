"""Event-driven wave-front tracking.

Fronts move on straight lines between interactions.  At every interaction
the Riemann problem between the outer states of the colliding fronts is
re-solved: exactly (``ACCURATE``, rarefactions split into pieces of size at
most ``eps_fan``) when the product of the incoming strengths is at least
``rho_threshold``, otherwise with the simplified solver, which keeps the
incoming families and dumps the remainder into a non-physical front moving
at ``lambda_hat``.  The non-physical fronts are what keeps the number of
fronts finite.
"""
from __future__ import annotations

import csv
import enum
import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .diagnostics import (
    DEFAULT_POLICY,
    ApproachingPairPolicy,
    FunctionalTrace,
    cross_sum,
    interaction_potential,
    pair_sum,
    total_strength,
)
from .errors import FrontCountExplosion, SmallnessViolated, TotalVariationExceeded
from .fronts import Front, FrontState, sample_solution
from .hyperbolic_system import SystemModel, _eigenvalues
from .riemann import ZERO_STRENGTH, WaveKind, _curve, solve_riemann


class Mode(enum.Enum):
    ACCURATE = "Accurate"
    SIMPLIFIED = "Simplified"


@dataclass
class TrackingParams:
    eps_fan: float = 0.05
    rho_threshold: float = 1e-4
    lambda_hat: Optional[float] = None
    tie_epsilon: float = 1e-12
    C0: float = 1.0
    max_fronts: int = 5000
    max_events: int = 200_000
    smallness: float = math.inf
    policy: ApproachingPairPolicy = field(default=DEFAULT_POLICY)


@dataclass
class FTEvent:
    time: float
    position: float
    incoming: List[Front]
    outgoing: List[Front]
    delta_V: float
    delta_Q: float
    mode: Mode

    @property
    def product(self) -> float:
        if len(self.incoming) != 2:
            return math.nan
        return self.incoming[0].size * self.incoming[1].size


# ------------------------------------------------------ initial discretization


def discretize_initial(
    model: SystemModel,
    u_bar,
    mesh: float,
    tv_budget: float,
    eps_fan: float = 0.05,
    x_range=None,
    t0: float = 0.0,
) -> FrontState:
    """Piecewise-constant approximation of ``u_bar`` resolved into wave fronts.

    ``u_bar`` is either a callable ``x -> state`` (constant outside
    ``x_range``), sampled and held on the mesh ``x_range[0] + k * mesh``, or
    an exact piecewise-constant description ``(breakpoints, states)`` with
    ``len(states) == len(breakpoints) + 1``.
    """
    if callable(u_bar):
        if x_range is None:
            raise ValueError("x_range is required for a callable u_bar")
        a, b = x_range
        m = int(round((b - a) / mesh))
        nodes = a + mesh * np.arange(m + 1)
        values = [np.atleast_1d(np.asarray(u_bar(a - mesh), dtype=float))]
        values += [np.atleast_1d(np.asarray(u_bar(x), dtype=float)) for x in nodes]
        breaks = list(nodes)
    else:
        breaks, values = u_bar
        breaks = [float(x) for x in breaks]
        values = [np.atleast_1d(np.asarray(v, dtype=float)) for v in values]
        if len(values) != len(breaks) + 1:
            raise ValueError("need one more state than breakpoints")
    tv = sum(float(np.linalg.norm(values[k + 1] - values[k])) for k in range(len(breaks)))
    if tv > tv_budget:
        raise TotalVariationExceeded(f"TV {tv:.4g} exceeds budget {tv_budget:.4g}")
    fronts: List[Front] = []
    for k, x in enumerate(breaks):
        ul, ur = values[k], values[k + 1]
        if np.array_equal(ul, ur):
            continue
        fronts.extend(approximate_riemann(model, ul, ur, eps_fan, x=x, t=t0))
    return FrontState(t0, fronts, values[0], model.n)


# --------------------------------------------------- approximate Riemann solver


def approximate_riemann(
    model: SystemModel,
    u_minus,
    u_plus,
    eps_fan: float,
    mode: Mode = Mode.ACCURATE,
    incoming: Sequence[Front] = (),
    lambda_hat: Optional[float] = None,
    x: float = 0.0,
    t: float = 0.0,
) -> List[Front]:
    """Piecewise-constant solution of a Riemann problem as a list of fronts at ``x``."""
    um = np.atleast_1d(np.asarray(u_minus, dtype=float))
    up = np.atleast_1d(np.asarray(u_plus, dtype=float))
    if np.array_equal(um, up):
        return []
    gen_by_family = {}
    for f in incoming:
        gen_by_family[f.family] = max(gen_by_family.get(f.family, 0), f.generation)
    new_gen = (max(gen_by_family.values()) + 1) if gen_by_family else 0
    rare_families = {f.family for f in incoming if f.kind is WaveKind.RAREFACTION_PIECE}

    def gen(family):
        return gen_by_family.get(family, new_gen)

    if mode is Mode.SIMPLIFIED:
        return _simplified(model, um, up, incoming, lambda_hat, x, t, gen)

    fan = solve_riemann(model, um, up)
    out: List[Front] = []
    for w in fan.waves:
        if abs(w.strength) <= ZERO_STRENGTH:
            continue
        i = w.family - 1
        if w.kind is WaveKind.RAREFACTION:
            pieces = 1 if w.family in rare_families else max(1, math.ceil(w.strength / eps_fan - 1e-9))
            taus = w.strength * np.arange(pieces + 1) / pieces
            states = [w.curve(tau) for tau in taus]
            states[0], states[-1] = w.left_state, w.right_state
            for k in range(pieces):
                right = states[k + 1]
                out.append(
                    Front(x, w.family, WaveKind.RAREFACTION_PIECE, states[k], right,
                          float(_eigenvalues(model, right)[i]), float(taus[k + 1] - taus[k]), gen(w.family), t)
                )
        else:
            out.append(Front(x, w.family, w.kind, w.left_state, w.right_state, float(w.speed), float(w.strength), gen(w.family), t))
    _stitch(out, um, up)
    return out


def _simplified(model, um, up, incoming, lambda_hat, x, t, gen) -> List[Front]:
    n = model.n
    strengths = {}
    for f in incoming:
        if f.family <= n:
            strengths[f.family] = strengths.get(f.family, 0.0) + f.strength
    out: List[Front] = []
    u = um
    for family in sorted(strengths):
        s = strengths[family]
        if abs(s) <= ZERO_STRENGTH:
            continue
        i = family - 1
        right, lam, _, kind = _curve(model, i, u, s)
        if kind is WaveKind.RAREFACTION:
            kind = WaveKind.RAREFACTION_PIECE
            lam = float(_eigenvalues(model, right)[i])
        out.append(Front(x, family, kind, u, right, float(lam), float(s), gen(family), t))
        u = right
    jump = float(np.linalg.norm(up - u))
    if jump > 1e-13 * max(1.0, float(np.linalg.norm(up))):
        speed = lambda_hat if lambda_hat is not None else model.lambda_hat
        out.append(Front(x, n + 1, WaveKind.NONPHYSICAL, u, up, float(speed), jump, gen(n + 1), t))
    elif out:
        out[-1].right_state = up
    _stitch(out, um, up)
    return out


def _stitch(out: List[Front], um, up) -> None:
    # make consecutive states bit-identical so the profile stays consistent
    if not out:
        return
    out[0].left_state = um
    for a, b in zip(out, out[1:]):
        b.left_state = a.right_state
    out[-1].right_state = up


# ------------------------------------------------------------- the evolution


class TrackedSolution:
    """Complete space-time history of a front-tracking run."""

    def __init__(self, model: SystemModel, left_state, history: List[Front], t_start: float, t_end: float):
        self.model = model
        self.left_state = left_state
        self.history = history
        self.t_start = t_start
        self.t_end = t_end

    def alive(self, t: float) -> List[Front]:
        fr = [f for f in self.history if f.t_birth <= t < f.t_death or (f.t_death == t == self.t_end)]
        fr.sort(key=lambda f: (f.x(t), f.uid))
        return fr

    def state_at(self, t: float) -> FrontState:
        return FrontState(t, [f.at(t) for f in self.alive(t)], self.left_state, self.model.n)

    def sample(self, t: float, xs) -> np.ndarray:
        return sample_solution(self.state_at(t), np.atleast_1d(np.asarray(xs, dtype=float)))

    def breakpoints(self, t: float) -> np.ndarray:
        return np.array([f.x(t) for f in self.alive(t)])

    def one_sided(self, t: float, x: float, tol: float = 1e-10):
        st = self.state_at(t)
        pos = st.positions
        at = [k for k in range(len(st.fronts)) if abs(pos[k] - x) <= tol * (1 + abs(x))]
        if not at:
            u = sample_solution(st, x)
            return u, u
        return st.fronts[at[0]].left_state.copy(), st.fronts[at[-1]].right_state.copy()

    def total_variation(self, t: float, a: float, b: float) -> float:
        st = self.state_at(t)
        return float(
            sum(np.linalg.norm(f.right_state - f.left_state) for f, x in zip(st.fronts, st.positions) if a < x < b)
        )


class EvolveResult(NamedTuple):
    state: FrontState
    events: List[FTEvent]
    trace: FunctionalTrace
    solution: TrackedSolution


def evolve(model: SystemModel, initial: FrontState, t_end: float, params: Optional[TrackingParams] = None) -> EvolveResult:
    """Track fronts from ``initial.time`` to ``t_end``.

    Returns the state at ``t_end``, the interaction events (with the
    changes of ``V`` and ``Q`` across each), the functional trace and the
    full space-time history.
    """
    p = params or TrackingParams()
    lam_hat = p.lambda_hat if p.lambda_hat is not None else model.lambda_hat
    t = float(initial.time)
    uid = itertools.count()
    fronts: List[Front] = []
    for f in sorted(initial.fronts, key=lambda f: f.x(initial.time)):
        g = f.at(t)
        g.uid, g.t_birth, g.t_death = next(uid), t, math.inf
        fronts.append(g)
    if len(fronts) > p.max_fronts:
        raise FrontCountExplosion(f"{len(fronts)} initial fronts exceed max_fronts={p.max_fronts}")
    history = list(fronts)
    policy = p.policy

    V = total_strength(FrontState(t, fronts, initial.left_boundary_state))
    Q = interaction_potential(FrontState(t, fronts, initial.left_boundary_state), policy)
    if V + p.C0 * Q > p.smallness:
        raise SmallnessViolated(f"V + C0 Q = {V + p.C0 * Q:.4g} exceeds {p.smallness:.4g}")
    trace = FunctionalTrace()
    trace.append(t, V, Q, p.C0)
    events: List[FTEvent] = []

    heap: list = []
    counter = itertools.count()
    alive = {f.uid for f in fronts}

    def schedule(a: Front, b: Front, now: float):
        if a.speed <= b.speed:
            return
        gap = max(0.0, b.x(now) - a.x(now))
        tc = now + gap / (a.speed - b.speed)
        if tc <= t_end:
            heapq.heappush(heap, (tc, a.x(tc), next(counter), a, b))

    for a, b in zip(fronts, fronts[1:]):
        schedule(a, b, t)

    while heap:
        tc = heap[0][0]
        if tc > t_end:
            break
        batch = []
        while heap and heap[0][0] <= tc + p.tie_epsilon:
            batch.append(heapq.heappop(heap))
        batch.sort(key=lambda e: (e[1], e[0]))
        for tc_e, _, _, a, b in batch:
            if a.uid not in alive or b.uid not in alive:
                continue
            j = _index(fronts, a)
            if j + 1 >= len(fronts) or fronts[j + 1] is not b:
                continue
            t = tc_e
            ev, lo = _interact(model, fronts, j, t, p, lam_hat, uid, policy)
            for f in ev.incoming:
                f.t_death = t
                alive.discard(f.uid)
            for f in ev.outgoing:
                alive.add(f.uid)
                history.append(f)
            V += ev.delta_V
            Q += ev.delta_Q
            events.append(ev)
            trace.append(t, V, Q, p.C0, event=True)
            hi = lo + len(ev.outgoing)
            if lo > 0 and hi > lo:
                schedule(fronts[lo - 1], fronts[lo], t)
            for k in range(lo, hi - 1):
                schedule(fronts[k], fronts[k + 1], t)
            if hi < len(fronts) and hi > lo:
                schedule(fronts[hi - 1], fronts[hi], t)
            if hi == lo and 0 < lo < len(fronts):
                schedule(fronts[lo - 1], fronts[lo], t)
            if len(fronts) > p.max_fronts:
                raise FrontCountExplosion(f"{len(fronts)} fronts at t={t:.6g}; increase rho_threshold")
            if len(events) > p.max_events:
                raise FrontCountExplosion(f"more than {p.max_events} interactions before t={t:.6g}")

    solution = TrackedSolution(model, initial.left_boundary_state, history, float(initial.time), float(t_end))
    final = FrontState(float(t_end), [f.at(t_end) for f in fronts], initial.left_boundary_state, model.n)
    if not trace.t or trace.t[-1] != t_end:
        trace.append(t_end, V, Q, p.C0)
    return EvolveResult(final, events, trace, solution)


def _index(fronts: List[Front], f: Front) -> int:
    for k, g in enumerate(fronts):
        if g is f:
            return k
    raise ValueError("front not alive")


def _interact(model, fronts, j, t, p: TrackingParams, lam_hat, uid, policy):
    """Resolve the collision at ``fronts[j]``; returns the event and the slot of the outgoing fronts."""
    a, b = fronts[j], fronts[j + 1]
    x = 0.5 * (a.x(t) + b.x(t))
    tol = 1e-11 * (1.0 + abs(x))
    k = j + 1
    while j > 0 and abs(fronts[j - 1].x(t) - x) <= tol:
        j -= 1
    while k + 1 < len(fronts) and abs(fronts[k + 1].x(t) - x) <= tol:
        k += 1
    incoming = fronts[j : k + 1]
    if len(incoming) == 2 and not any(f.nonphysical for f in incoming):
        mode = Mode.ACCURATE if incoming[0].size * incoming[1].size >= p.rho_threshold else Mode.SIMPLIFIED
    elif any(f.nonphysical for f in incoming) and len(incoming) == 2:
        mode = Mode.SIMPLIFIED
    else:
        mode = Mode.ACCURATE
    u_l, u_r = incoming[0].left_state, incoming[-1].right_state
    outgoing = approximate_riemann(model, u_l, u_r, p.eps_fan, mode, incoming, lam_hat, x=x, t=t)
    for f in outgoing:
        f.uid, f.t_birth, f.t_death = next(uid), t, math.inf
    left, right = fronts[:j], fronts[k + 1 :]
    dV = sum(f.size for f in outgoing) - sum(f.size for f in incoming)
    q_in = pair_sum(incoming, policy) + cross_sum(left, incoming, policy) + cross_sum(incoming, right, policy)
    q_out = pair_sum(outgoing, policy) + cross_sum(left, outgoing, policy) + cross_sum(outgoing, right, policy)
    fronts[j : k + 1] = outgoing
    return FTEvent(t, x, list(incoming), list(outgoing), float(dV), float(q_out - q_in), mode), j


# ----------------------------------------------------------------- exports


def write_snapshot_csv(state: FrontState, path, xs: Sequence[float]) -> None:
    """Rows ``t, x, u_1..u_n`` sampling the profile at ``xs``."""
    vals = sample_solution(state, np.asarray(xs, dtype=float))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "x"] + [f"u_{i + 1}" for i in range(vals.shape[1])])
        for x, u in zip(xs, vals):
            w.writerow([repr(float(state.time)), repr(float(x))] + [repr(float(c)) for c in u])


def write_fronts_csv(state: FrontState, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "x", "family", "kind", "strength", "speed", "generation"])
        for f in state.fronts:
            w.writerow([repr(float(state.time)), repr(float(f.x(state.time))), f.family, f.kind.value,
                        repr(float(f.strength)), repr(float(f.speed)), f.generation])


def write_events_csv(events: Sequence[FTEvent], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "x", "families", "strengths", "delta_V", "delta_Q", "mode"])
        for e in events:
            w.writerow([
                repr(float(e.time)),
                repr(float(e.position)),
                " ".join(str(f.family) for f in e.incoming),
                " ".join(repr(float(f.strength)) for f in e.incoming),
                repr(float(e.delta_V)),
                repr(float(e.delta_Q)),
                e.mode.value,
            ])
