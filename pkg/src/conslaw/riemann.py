"""Small-amplitude Riemann solver (Lax construction) and jump primitives.

Wave curves are parametrised by a signed strength ``s``.  For a genuinely
nonlinear family, ``s > 0`` follows the integral curve of the unit field
``r_i`` (so ``s`` is arc length there) and ``s < 0`` the Lax-admissible
branch of the Hugoniot locus, parametrised by the projection
``r_i(u0) . (u - u0) = s``.  Linearly degenerate families use the Hugoniot
locus (a contact curve) for both signs.  Both branches leave ``u0`` with
tangent ``r_i(u0)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import (
    AmplitudeTooLarge,
    CurveSolveFailure,
    NoSolutionInRange,
    NotAdmissible,
)
from .hyperbolic_system import FieldType, SystemModel, _eigenvalues, eigen_decompose

TOL_RH = 1e-10
TOL_RIEMANN = 1e-10
TOL_ENTROPY = 1e-12
ODE_RTOL = 1e-12
ODE_ATOL = 1e-13
ZERO_STRENGTH = 1e-14


class WaveKind(enum.Enum):
    SHOCK = "Shock"
    CONTACT = "Contact"
    RAREFACTION = "Rarefaction"
    RAREFACTION_PIECE = "RarefactionPiece"
    NONPHYSICAL = "NonPhysical"


@dataclass
class ElementaryWave:
    family: int  # 1-based
    kind: WaveKind
    left_state: np.ndarray
    right_state: np.ndarray
    strength: float
    speed: Optional[float] = None  # shocks and contacts
    speed_range: Optional[tuple] = None  # rarefactions: (xi_lo, xi_hi)
    curve: Optional[Callable[[float], np.ndarray]] = field(default=None, repr=False, compare=False)

    @property
    def slowest(self) -> float:
        return self.speed if self.speed_range is None else self.speed_range[0]

    @property
    def fastest(self) -> float:
        return self.speed if self.speed_range is None else self.speed_range[1]


@dataclass
class WaveFan:
    model: SystemModel = field(repr=False)
    states: List[np.ndarray]
    waves: List[ElementaryWave]

    @property
    def strengths(self) -> np.ndarray:
        return np.array([w.strength for w in self.waves])

    @property
    def u_minus(self):
        return self.states[0]

    @property
    def u_plus(self):
        return self.states[-1]

    def sample(self, xi: float) -> np.ndarray:
        return sample_fan(self, xi)


@dataclass(frozen=True)
class ShockComponents:
    q: np.ndarray  # curve parameters of the n Hugoniot jumps
    speeds: np.ndarray  # their Rankine-Hugoniot speeds
    states: tuple  # omega_0 = u, ..., omega_n = v


# --------------------------------------------------------------- primitives


def rh_residual(model: SystemModel, u_minus, u_plus, lam: float) -> np.ndarray:
    """``f(u+) - f(u-) - lam (u+ - u-)``."""
    um = model.check_domain(u_minus)
    up = model.check_domain(u_plus)
    return model.f(up) - model.f(um) - lam * (up - um)


def lax_admissible_family(model: SystemModel, u_minus, u_plus, lam: float, tol: float = TOL_ENTROPY) -> Optional[int]:
    """Smallest family ``i`` (1-based) with ``lambda_i(u-) >= lam >= lambda_i(u+)``, else ``None``."""
    lm = eigen_decompose(model, u_minus).lambdas
    lp = eigen_decompose(model, u_plus).lambdas
    for i in range(model.n):
        if lm[i] + tol >= lam >= lp[i] - tol:
            return i + 1
    return None


def _require_h(model: SystemModel, i: int):
    if model.field_classes[i] is FieldType.INDETERMINATE:
        raise NotAdmissible(f"family {i + 1} of {model.name} is neither genuinely nonlinear nor linearly degenerate")


def _hugoniot(model: SystemModel, i: int, u0: np.ndarray, s: float):
    """Point on the i-Hugoniot locus with ``r_i(u0).(u-u0) = s`` and its RH speed."""
    es0 = eigen_decompose(model, u0, check_domain=False)
    r0 = es0.r(i)
    if abs(s) <= ZERO_STRENGTH:
        return u0.copy(), float(es0.lambdas[i])
    if model.n == 1:
        u = u0 + s * r0
        return u, float((model.f(u) - model.f(u0))[0] / (u - u0)[0])
    if model.is_linear:
        return u0 + s * r0, float(es0.lambdas[i])
    n = model.n
    f0 = model.f(u0)
    z = r0.copy()
    lam = float(es0.lambdas[i])
    eye = np.eye(n)
    J = np.zeros((n + 1, n + 1))
    J[n, :n] = r0
    for _ in range(60):
        u = u0 + s * z
        G = np.empty(n + 1)
        G[:n] = (model.f(u) - f0) / s - lam * z
        G[n] = r0 @ z - 1.0
        J[:n, :n] = model.A(u) - lam * eye
        J[:n, n] = -z
        step = np.linalg.solve(J, -G)
        z += step[:n]
        lam += step[n]
        if np.max(np.abs(step)) < 1e-15 * max(1.0, float(np.max(np.abs(z)))):
            break
    u = u0 + s * z
    res = model.f(u) - f0 - lam * (u - u0)
    if not np.all(np.isfinite(res)) or np.max(np.abs(res)) > 1e-12 * max(1.0, abs(s)):
        raise CurveSolveFailure(f"Hugoniot Newton failed for family {i + 1}, s={s}")
    return u, float(lam)


def _integral_curve(model: SystemModel, i: int, u0: np.ndarray, s: float, dense: bool = False):
    """Integrate ``du/ds = r_i(u)`` from ``u0`` over ``[0, s]``."""
    r0 = eigen_decompose(model, u0, check_domain=False).r(i)
    if model.n == 1 or model.is_linear:
        end = u0 + s * r0
        return end, (lambda tau: u0 + tau * r0) if dense else None
    if abs(s) <= ZERO_STRENGTH:
        return u0.copy(), (lambda tau: u0.copy()) if dense else None

    def rhs(_, u):
        return eigen_decompose(model, u, check_domain=False).r(i)

    sol = solve_ivp(rhs, (0.0, s), u0, method="DOP853", rtol=ODE_RTOL, atol=ODE_ATOL, dense_output=dense)
    if not sol.success:
        raise CurveSolveFailure(f"integral curve of family {i + 1} failed: {sol.message}")
    end = sol.y[:, -1].copy()
    if dense:
        dsol = sol.sol
        return end, (lambda tau: np.asarray(dsol(tau), dtype=float).reshape(model.n))
    return end, None


def _curve(model: SystemModel, i: int, u0: np.ndarray, s: float, dense: bool = False, shock_only: bool = False):
    """Returns ``(state, speed, dense_curve, kind)`` for the i-wave of strength ``s`` from ``u0``."""
    if abs(s) > model.s_max:
        raise AmplitudeTooLarge(f"|s|={abs(s)} exceeds s_max={model.s_max}")
    ftype = model.field_classes[i]
    if ftype is FieldType.LINEARLY_DEGENERATE:
        u, lam = _hugoniot(model, i, u0, s)
        return u, lam, None, WaveKind.CONTACT
    _require_h(model, i)
    if s > 0 and not shock_only:
        u, curve = _integral_curve(model, i, u0, s, dense=dense)
        return u, None, curve, WaveKind.RAREFACTION
    u, lam = _hugoniot(model, i, u0, s)
    return u, lam, None, WaveKind.SHOCK


def wave_curve(model: SystemModel, family: int, u0, s: float) -> np.ndarray:
    """State reached from ``u0`` along the ``family``-wave curve at parameter ``s``."""
    u0 = model.check_domain(u0)
    u, *_ = _curve(model, family - 1, u0, float(s))
    return u


def shock_speed(model: SystemModel, family: int, u0, s: float) -> float:
    u0 = model.check_domain(u0)
    _, lam = _hugoniot(model, family - 1, u0, float(s))
    return lam


# ------------------------------------------------------------- Riemann solve


def _compose(model: SystemModel, u_minus: np.ndarray, s: np.ndarray, shock_only: bool):
    states = [u_minus]
    for i in range(model.n):
        u, *_ = _curve(model, i, states[-1], float(s[i]), shock_only=shock_only)
        states.append(u)
    return states


def _solve_parameters(model: SystemModel, u_minus: np.ndarray, u_plus: np.ndarray, shock_only: bool) -> np.ndarray:
    es = eigen_decompose(model, u_minus)
    s = es.left_vecs @ (u_plus - u_minus)
    if model.n == 1 or model.is_linear:
        return s
    scale = max(1.0, float(np.max(np.abs(u_plus))))
    best = np.inf
    for _ in range(40):
        F = _compose(model, u_minus, s, shock_only)[-1] - u_plus
        err = float(np.max(np.abs(F)))
        if err <= 1e-14 * scale:
            break
        if err >= best and err <= TOL_RIEMANN:
            break
        best = min(best, err)
        J = np.empty((model.n, model.n))
        for k in range(model.n):
            h = 1e-7 * max(1.0, abs(s[k]))
            sp = s.copy()
            sp[k] += h
            J[:, k] = (_compose(model, u_minus, sp, shock_only)[-1] - u_plus - F) / h
        try:
            ds = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError as exc:
            raise NoSolutionInRange(f"singular wave-curve Jacobian: {exc}") from None
        s = s + ds
        if np.any(np.abs(s) > model.s_max) or not np.all(np.isfinite(s)):
            raise NoSolutionInRange(f"curve parameters {s} left the s_max box")
    F = _compose(model, u_minus, s, shock_only)[-1] - u_plus
    if float(np.max(np.abs(F))) > TOL_RIEMANN:
        raise NoSolutionInRange(f"Riemann Newton did not converge (residual {np.max(np.abs(F)):.3e})")
    return s


def _check_jump(model: SystemModel, u_minus, u_plus):
    um = model.check_domain(u_minus)
    up = model.check_domain(u_plus)
    if float(np.linalg.norm(up - um)) > model.jump_max:
        raise AmplitudeTooLarge(f"jump {np.linalg.norm(up - um):.3g} exceeds jump_max={model.jump_max:.3g}")
    return um, up


def fan_from_strengths(model: SystemModel, u_minus: np.ndarray, s) -> WaveFan:
    """Assemble the wave fan obtained by following the wave curves with parameters ``s``."""
    states = [np.asarray(u_minus, dtype=float)]
    waves = []
    for i in range(model.n):
        left = states[-1]
        si = float(s[i])
        u, lam, curve, kind = _curve(model, i, left, si, dense=True)
        if abs(si) <= ZERO_STRENGTH:
            u = left.copy()
            lam_left = float(eigen_decompose(model, left, check_domain=False).lambdas[i])
            kind = WaveKind.CONTACT if kind is WaveKind.CONTACT else WaveKind.SHOCK
            wave = ElementaryWave(i + 1, kind, left, u, 0.0, speed=lam_left)
        elif kind is WaveKind.RAREFACTION:
            lo = float(_eigenvalues(model, left)[i])
            hi = float(_eigenvalues(model, u)[i])
            wave = ElementaryWave(i + 1, kind, left, u, si, speed_range=(lo, hi), curve=curve)
        else:
            wave = ElementaryWave(i + 1, kind, left, u, si, speed=lam)
        states.append(u)
        waves.append(wave)
    return WaveFan(model, states, waves)


def solve_riemann(model: SystemModel, u_minus, u_plus) -> WaveFan:
    """Self-similar Lax solution of the Riemann problem ``(u_minus, u_plus)``."""
    um, up = _check_jump(model, u_minus, u_plus)
    s = _solve_parameters(model, um, up, shock_only=False)
    fan = fan_from_strengths(model, um, s)
    # pin the last state to the data; the composition already matches to TOL_RIEMANN
    fan.states[-1] = up.copy()
    fan.waves[-1].right_state = up.copy()
    return fan


def sample_fan(fan: WaveFan, xi: float) -> np.ndarray:
    """Evaluate ``U(xi)``; at an exact shock speed the right state is returned."""
    model = fan.model
    for k, w in enumerate(fan.waves):
        if w.speed_range is None:
            if xi < w.speed:
                return fan.states[k].copy()
            continue
        lo, hi = w.speed_range
        if xi < lo:
            return fan.states[k].copy()
        if xi < hi:
            return _rarefaction_state(model, w, xi)
    return fan.states[-1].copy()


def _rarefaction_state(model: SystemModel, w: ElementaryWave, xi: float) -> np.ndarray:
    i = w.family - 1
    curve = w.curve
    if curve is None:
        _, curve = _integral_curve(model, i, w.left_state, w.strength, dense=True)
        w.curve = curve
    g = lambda tau: float(_eigenvalues(model, curve(tau))[i]) - xi
    a, b = 0.0, w.strength
    ga, gb = g(a), g(b)
    if ga >= 0:
        return curve(a)
    if gb <= 0:
        return curve(b)
    tau = brentq(g, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return curve(tau)


def shock_components(model: SystemModel, u, v) -> ShockComponents:
    """Decompose the jump ``(u, v)`` into ``n`` Hugoniot jumps (no entropy selection)."""
    uu, vv = _check_jump(model, u, v)
    if np.array_equal(uu, vv):
        lam = eigen_decompose(model, uu).lambdas
        return ShockComponents(np.zeros(model.n), lam.copy(), tuple([uu] * (model.n + 1)))
    q = _solve_parameters(model, uu, vv, shock_only=True)
    states = [uu]
    speeds = np.empty(model.n)
    for i in range(model.n):
        w, lam = _hugoniot(model, i, states[-1], float(q[i]))
        states.append(w)
        speeds[i] = lam
    states[-1] = vv
    return ShockComponents(np.asarray(q, dtype=float), speeds, tuple(states))


# ------------------------------------------------------------ serialization


def fan_to_dict(fan: WaveFan) -> dict:
    return {
        "model": fan.model.name,
        "params": fan.model.params,
        "states": [list(map(float, s)) for s in fan.states],
        "waves": [
            {
                "family": w.family,
                "kind": w.kind.value,
                "strength": float(w.strength),
                "speed": None if w.speed is None else float(w.speed),
                "speed_range": None if w.speed_range is None else [float(x) for x in w.speed_range],
            }
            for w in fan.waves
        ],
    }


def fan_from_dict(d: dict, model: SystemModel) -> WaveFan:
    states = [np.array(s, dtype=float) for s in d["states"]]
    waves = []
    for k, wd in enumerate(d["waves"]):
        waves.append(
            ElementaryWave(
                family=wd["family"],
                kind=WaveKind(wd["kind"]),
                left_state=states[k],
                right_state=states[k + 1],
                strength=wd["strength"],
                speed=wd["speed"],
                speed_range=None if wd["speed_range"] is None else tuple(wd["speed_range"]),
            )
        )
    return WaveFan(model, states, waves)
