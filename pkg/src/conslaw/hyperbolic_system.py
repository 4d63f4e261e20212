"""Conservation-law models: flux, Jacobian, eigenstructure and field types.

A :class:`SystemModel` bundles the flux ``f`` of ``u_t + f(u)_x = 0`` with its
Jacobian ``A(u) = Df(u)`` and an explicit box of admissible states.  The
eigenvectors returned by :func:`eigen_decompose` carry a fixed orientation:
the sign of every ``r_i`` is chosen at the centre of the box (so that
``Dlambda_i . r_i > 0`` for genuinely nonlinear families) and continued from
there, which is what the wave-curve parametrisation in :mod:`conslaw.riemann`
relies on.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.stats import qmc

from .errors import DomainViolation, NotFound, NotStrictlyHyperbolic

LD_TOL = 1e-8


class FieldType(enum.Enum):
    GENUINELY_NONLINEAR = "GenuinelyNonlinear"
    LINEARLY_DEGENERATE = "LinearlyDegenerate"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class EigenStructure:
    lambdas: np.ndarray  # (n,), strictly increasing
    right_vecs: np.ndarray  # (n, n), column i is r_i, unit norm
    left_vecs: np.ndarray  # (n, n), row i is l_i with l_i . r_j = delta_ij

    def r(self, i: int) -> np.ndarray:
        return self.right_vecs[:, i]

    def l(self, i: int) -> np.ndarray:
        return self.left_vecs[i]


@dataclass(frozen=True)
class FieldClass:
    classes: tuple
    gn_lower_bound: tuple  # inf of Dlambda_i . r_i over the samples, None unless GN
    samples_used: int = 0

    def __getitem__(self, i):
        return self.classes[i]


@dataclass(frozen=True, eq=False)
class SystemModel:
    """An ``n x n`` system ``u_t + f(u)_x = 0`` on an axis-aligned state box.

    ``flux`` may be ``None`` for a purely non-conservative model
    ``u_t + A(u) u_x = 0``; the viscous solver then falls back to the
    upwind product form.  When ``jacobian`` is omitted a central-difference
    Jacobian is used and ``fd_jacobian`` is set.
    """

    name: str
    n: int
    flux: Optional[Callable[[np.ndarray], np.ndarray]]
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]]
    domain_lo: np.ndarray
    domain_hi: np.ndarray
    params: dict = field(default_factory=dict)
    gamma_min: float = 1e-6
    h_fd: float = 1e-5
    is_linear: bool = False
    jump_max: Optional[float] = None
    s_max: Optional[float] = None
    fd_jacobian: bool = False

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.domain_lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.domain_hi, dtype=float))
        if lo.shape != (self.n,) or hi.shape != (self.n,) or np.any(hi <= lo):
            raise ValueError(f"bad domain box for {self.name}: {lo}, {hi}")
        object.__setattr__(self, "domain_lo", lo)
        object.__setattr__(self, "domain_hi", hi)
        if self.jacobian is None:
            if self.flux is None:
                raise ValueError("a model needs a flux or a Jacobian")
            object.__setattr__(self, "jacobian", _fd_jacobian(self.flux, self.h_fd))
            object.__setattr__(self, "fd_jacobian", True)
        diam = float(np.linalg.norm(hi - lo))
        if self.jump_max is None:
            object.__setattr__(self, "jump_max", 0.5 * diam)
        if self.s_max is None:
            object.__setattr__(self, "s_max", 0.5 * diam)

    def __repr__(self):
        return f"SystemModel(name={self.name!r}, n={self.n}, params={self.params!r})"

    @property
    def conservative(self) -> bool:
        return self.flux is not None

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.domain_lo + self.domain_hi)

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.domain_hi - self.domain_lo))

    def f(self, u) -> np.ndarray:
        return np.asarray(self.flux(np.asarray(u, dtype=float)), dtype=float).reshape(self.n)

    def A(self, u) -> np.ndarray:
        return np.asarray(self.jacobian(np.asarray(u, dtype=float)), dtype=float).reshape(self.n, self.n)

    def in_domain(self, u, tol: float = 1e-12) -> bool:
        u = np.asarray(u, dtype=float)
        return bool(np.all(u >= self.domain_lo - tol) and np.all(u <= self.domain_hi + tol))

    def check_domain(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if u.shape != (self.n,):
            raise ValueError(f"state of shape {u.shape} for an n={self.n} model")
        if not self.in_domain(u):
            raise DomainViolation(f"state {u} outside domain box of {self.name}")
        return u

    def sample_points(self, m: int = 100) -> np.ndarray:
        """Deterministic quasi-random points (Halton) filling the domain box."""
        pts = qmc.Halton(d=self.n, scramble=False).random(m + 1)[1:]
        return self.domain_lo + pts * (self.domain_hi - self.domain_lo)

    @cached_property
    def _orientation(self) -> np.ndarray:
        # Reference eigenvectors at the box centre, signed so that
        # Dlambda_i . r_i >= 0; everything else is continued from these.
        u0 = self.center
        lam, R = _raw_eig(self, u0)
        for i in range(self.n):
            d = _dlambda_dot_r(self, u0, i, R[:, i])
            if d < -LD_TOL:
                R[:, i] = -R[:, i]
        return R

    @cached_property
    def field_classes(self) -> FieldClass:
        return classify_fields(self, self.sample_points(64))

    def is_gn(self, i: int) -> bool:
        """``i`` is a zero-based family index."""
        return self.field_classes[i] is FieldType.GENUINELY_NONLINEAR

    def is_ld(self, i: int) -> bool:
        return self.field_classes[i] is FieldType.LINEARLY_DEGENERATE

    @cached_property
    def speed_bounds(self) -> tuple:
        """(inf lambda_1, sup lambda_n) over corners and quasi-random points of the box."""
        pts = [self.sample_points(200)]
        corners = np.array(np.meshgrid(*[[a, b] for a, b in zip(self.domain_lo, self.domain_hi)])).reshape(self.n, -1).T
        pts.append(corners)
        lo, hi = np.inf, -np.inf
        for u in np.vstack(pts):
            lam = np.sort(np.linalg.eigvals(self.A(u)).real)
            lo, hi = min(lo, lam[0]), max(hi, lam[-1])
        return float(lo), float(hi)

    @property
    def max_speed(self) -> float:
        lo, hi = self.speed_bounds
        return max(abs(lo), abs(hi))

    @property
    def lambda_hat(self) -> float:
        """Speed of non-physical fronts: strictly above every characteristic speed."""
        return self.speed_bounds[1] + 1.0


def _fd_jacobian(flux, h):
    def jac(u):
        u = np.asarray(u, dtype=float)
        n = u.size
        J = np.empty((n, n))
        for k in range(n):
            step = h * max(1.0, abs(u[k]))
            e = np.zeros(n)
            e[k] = step
            J[:, k] = (np.asarray(flux(u + e)) - np.asarray(flux(u - e))) / (2 * step)
        return J

    return jac


def _eig2(model: SystemModel, A: np.ndarray, u):
    a, b, c, d = float(A[0, 0]), float(A[0, 1]), float(A[1, 0]), float(A[1, 1])
    half_tr = 0.5 * (a + d)
    disc = 0.25 * (a - d) ** 2 + b * c
    if disc < (0.5 * model.gamma_min) ** 2:
        raise NotStrictlyHyperbolic(f"eigenvalue gap below {model.gamma_min} at u={u}")
    root = math.sqrt(disc)
    w = np.array([half_tr - root, half_tr + root])
    V = np.empty((2, 2))
    for k in range(2):
        lam = w[k]
        v1 = (b, lam - a)
        v2 = (lam - d, c)
        v = v1 if v1[0] ** 2 + v1[1] ** 2 >= v2[0] ** 2 + v2[1] ** 2 else v2
        if v[0] == 0.0 and v[1] == 0.0:  # A is a multiple of the identity
            v = (1.0, 0.0) if k == 0 else (0.0, 1.0)
        nrm = math.hypot(v[0], v[1])
        V[0, k], V[1, k] = v[0] / nrm, v[1] / nrm
    return w, V


def _raw_eig(model: SystemModel, u: np.ndarray):
    A = model.A(u)
    if model.n == 1:
        return A[0].copy(), np.ones((1, 1))
    if model.n == 2:
        w, V = _eig2(model, A, u)
        idx = np.argmax(np.abs(V), axis=0)
        return w, V * np.sign(V[idx, [0, 1]])
    w, V = np.linalg.eig(A)
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.max(np.abs(w.imag)) > 1e-12 * scale:
        raise NotStrictlyHyperbolic(f"complex eigenvalues {w} at u={u}")
    w = w.real
    V = V.real
    order = np.argsort(w)
    w, V = w[order], V[:, order]
    if np.any(np.diff(w) < model.gamma_min):
        raise NotStrictlyHyperbolic(f"eigenvalue gap below {model.gamma_min} at u={u}: {w}")
    V = V / np.linalg.norm(V, axis=0)
    # canonical sign: largest-magnitude component positive
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(model.n)])
    return w, V * signs


def _eigenvalues(model: SystemModel, u: np.ndarray) -> np.ndarray:
    if model.n == 1:
        return model.A(u)[0].copy()
    if model.n == 2:
        A = model.A(u)
        half_tr = 0.5 * (A[0, 0] + A[1, 1])
        root = math.sqrt(max(0.25 * (A[0, 0] - A[1, 1]) ** 2 + A[0, 1] * A[1, 0], 0.0))
        return np.array([half_tr - root, half_tr + root])
    w = np.linalg.eigvals(model.A(u))
    return np.sort(w.real)


def _dlambda_dot_r(model: SystemModel, u: np.ndarray, i: int, r: np.ndarray) -> float:
    h = model.h_fd * max(1.0, float(np.linalg.norm(u)))
    lp = _eigenvalues(model, u + h * r)[i]
    lm = _eigenvalues(model, u - h * r)[i]
    return float((lp - lm) / (2 * h))


def eigen_decompose(model: SystemModel, u, check_domain: bool = True) -> EigenStructure:
    """Sorted eigenvalues, oriented unit right eigenvectors and dual left eigenvectors of ``A(u)``."""
    u = model.check_domain(u) if check_domain else np.atleast_1d(np.asarray(u, dtype=float))
    lam, R = _raw_eig(model, u)
    ref = model._orientation
    signs = np.where(np.sum(R * ref, axis=0) < 0, -1.0, 1.0)
    R = R * signs
    if model.n == 2:
        det = R[0, 0] * R[1, 1] - R[0, 1] * R[1, 0]
        L = np.array([[R[1, 1], -R[0, 1]], [-R[1, 0], R[0, 0]]]) / det
    else:
        L = np.linalg.inv(R)
    return EigenStructure(np.atleast_1d(lam).astype(float), R, L)


def classify_fields(model: SystemModel, samples: Sequence) -> FieldClass:
    """Classify each family as genuinely nonlinear, linearly degenerate or neither.

    ``Dlambda_i . r_i`` is estimated by central differences along ``r_i``
    with step ``h_fd`` scaled by the state magnitude.
    """
    samples = [np.atleast_1d(np.asarray(s, dtype=float)) for s in samples]
    if not samples:
        raise ValueError("classify_fields needs at least one sample")
    vals = np.empty((len(samples), model.n))
    for k, u in enumerate(samples):
        model.check_domain(u)
        es = eigen_decompose(model, u)
        for i in range(model.n):
            vals[k, i] = _dlambda_dot_r(model, u, i, es.r(i))
    classes, bounds = [], []
    for i in range(model.n):
        col = vals[:, i]
        if np.all(np.abs(col) <= LD_TOL):
            classes.append(FieldType.LINEARLY_DEGENERATE)
            bounds.append(None)
        elif np.all(col > LD_TOL):
            classes.append(FieldType.GENUINELY_NONLINEAR)
            bounds.append(float(col.min()))
        else:
            classes.append(FieldType.INDETERMINATE)
            bounds.append(None)
    return FieldClass(tuple(classes), tuple(bounds), len(samples))


# ---------------------------------------------------------------- registry


def burgers(lo: float = -3.0, hi: float = 3.0) -> SystemModel:
    return SystemModel(
        name="burgers",
        n=1,
        flux=lambda u: 0.5 * u * u,
        jacobian=lambda u: np.array([[u[0]]]),
        domain_lo=[lo],
        domain_hi=[hi],
    )


def linear_system(matrix=((-1.0, 0.0), (0.0, 1.0)), bound: float = 5.0) -> SystemModel:
    M = np.array(matrix, dtype=float)
    n = M.shape[0]
    return SystemModel(
        name="linear",
        n=n,
        flux=lambda u: M @ u,
        jacobian=lambda u: M,
        domain_lo=[-bound] * n,
        domain_hi=[bound] * n,
        params={"matrix": M.tolist()},
        is_linear=True,
    )


def advection(speed: float = 1.0, bound: float = 10.0) -> SystemModel:
    a = float(speed)
    return SystemModel(
        name="advection",
        n=1,
        flux=lambda u: a * u,
        jacobian=lambda u: np.array([[a]]),
        domain_lo=[-bound],
        domain_hi=[bound],
        params={"speed": a},
        is_linear=True,
    )


def p_system(gamma: float = 1.4, v_range=(0.4, 2.5), u_range=(-1.5, 1.5)) -> SystemModel:
    """Isentropic gas in Lagrangian coordinates, state ``(v, u)``.

    ``v_t - u_x = 0``, ``u_t + p(v)_x = 0`` with ``p(v) = v**-gamma``.
    """
    g = float(gamma)

    def flux(w):
        return np.array([-w[1], w[0] ** -g])

    def jac(w):
        return np.array([[0.0, -1.0], [-g * w[0] ** (-g - 1.0), 0.0]])

    return SystemModel(
        name="p-system",
        n=2,
        flux=flux,
        jacobian=jac,
        domain_lo=[v_range[0], u_range[0]],
        domain_hi=[v_range[1], u_range[1]],
        params={"gamma": g},
    )


_REGISTRY = {
    "burgers": burgers,
    "linear": linear_system,
    "p-system": p_system,
    "advection": advection,
}


def get_model(name: str, **params) -> SystemModel:
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise NotFound(f"unknown model {name!r}; known: {sorted(_REGISTRY)}") from None
    return factory(**params)


def builtin_models() -> list:
    """Default-parameter instances of every registered model."""
    return [factory() for factory in _REGISTRY.values()]
