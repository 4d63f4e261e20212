"""Viscous approximations ``u_t + f(u)_x = eps u_xx`` and their Lyapunov functionals."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import solve_banded
from scipy.optimize import brentq

from .errors import DomainViolation, NonPositiveGap, NotAdmissible, ShootingFailure, StabilityViolation
from .glimm import GridSolution, piecewise_l1
from .hyperbolic_system import SystemModel, _eigenvalues, eigen_decompose
from .riemann import _hugoniot, lax_admissible_family

SAFETY = 0.9
RESCALE_BELOW = 0.005


@dataclass
class ViscousParams:
    epsilon: float
    x_span: tuple
    t_end: float
    dx: Optional[float] = None  # default: epsilon / 2
    dt: Optional[float] = None  # default: largest stable step
    scheme: str = "explicit"  # or "semi_implicit"
    form: str = "conservative"  # or "nonconservative"
    store_every: int = 1
    rescale: bool = True
    domain_check_every: int = 50

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.scheme not in ("explicit", "semi_implicit"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.form not in ("conservative", "nonconservative"):
            raise ValueError(f"unknown form {self.form!r}")

    @property
    def mesh(self) -> float:
        return self.dx if self.dx is not None else 0.5 * self.epsilon


def max_stable_dt(dx: float, epsilon: float, alpha: float, scheme: str = "explicit") -> float:
    """Largest step keeping the scheme monotone (scalar case)."""
    if scheme == "explicit":
        return SAFETY / (alpha / dx + 2.0 * epsilon / dx**2)
    return SAFETY * dx / max(alpha, 1e-300)


def check_stability(dx: float, dt: float, epsilon: float, alpha: float, scheme: str = "explicit") -> None:
    if dt > max_stable_dt(dx, epsilon, alpha, scheme) * (1 + 1e-12):
        raise StabilityViolation(
            f"dt={dt:.4g} exceeds stable step {max_stable_dt(dx, epsilon, alpha, scheme):.4g} "
            f"(dx={dx:.4g}, eps={epsilon:.4g}, sup|lambda|={alpha:.4g})"
        )


def _flux_rows(model: SystemModel, U: np.ndarray) -> np.ndarray:
    """f applied row-wise to an ``(N, n)`` array."""
    try:
        F = np.asarray(model.flux(U.T), dtype=float)
        if F.shape == (model.n, U.shape[0]):
            return F.T
    except Exception:
        pass
    return np.array([model.f(u) for u in U])


def _spectral_radius(model: SystemModel, U: np.ndarray, max_samples: int = 256) -> float:
    uniq = np.unique(U, axis=0)
    if len(uniq) > max_samples:
        uniq = uniq[np.linspace(0, len(uniq) - 1, max_samples).astype(int)]
    return max(float(np.max(np.abs(_eigenvalues(model, u)))) for u in uniq)


def _upwind_products(model: SystemModel, U: np.ndarray, dx: float) -> np.ndarray:
    """A(u) u_x with the eigen-split upwind differences."""
    out = np.zeros_like(U)
    dminus = np.diff(U, axis=0, prepend=U[:1]) / dx
    dplus = np.diff(U, axis=0, append=U[-1:]) / dx
    for j in range(U.shape[0]):
        es = eigen_decompose(model, U[j], check_domain=False)
        R, Lv = es.right_vecs, es.left_vecs
        lp = np.maximum(es.lambdas, 0.0)
        lm = np.minimum(es.lambdas, 0.0)
        out[j] = R @ (lp * (Lv @ dminus[j])) + R @ (lm * (Lv @ dplus[j]))
    return out


def _initial_cells(u_bar: Callable, xs: np.ndarray, n: int) -> np.ndarray:
    return np.array([np.atleast_1d(np.asarray(u_bar(x), dtype=float)) for x in xs]).reshape(len(xs), n)


def parabolic_solve(model: SystemModel, u_bar: Callable, params: ViscousParams) -> GridSolution:
    """Finite-volume solution on ``x_span`` with constant Dirichlet padding.

    Transport uses the Rusanov flux (conservative form) or eigen-split upwind
    products (non-conservative form); diffusion is the central second
    difference, explicit or backward Euler.
    """
    eps, dx = params.epsilon, params.mesh
    a, b = params.x_span
    N = int(round((b - a) / dx))
    xs = a + dx * (np.arange(N) + 0.5)
    U = _initial_cells(u_bar, xs, model.n)
    left = np.atleast_1d(np.asarray(u_bar(a - dx), dtype=float))
    right = np.atleast_1d(np.asarray(u_bar(b + dx), dtype=float))
    for u in (left, right, *U):
        model.check_domain(u)
    alpha = max(_spectral_radius(model, np.vstack([U, left, right])), 1e-12)
    dt = params.dt if params.dt is not None else max_stable_dt(dx, eps, alpha, params.scheme)
    check_stability(dx, dt, eps, alpha, params.scheme)

    rescaled = params.rescale and eps < RESCALE_BELOW
    # In the rescaled variables x' = x/eps, t' = t/eps the viscosity is 1;
    # the step ratios dt/dx and eps dt/dx^2 are unchanged.
    s = eps if rescaled else 1.0
    h, k, nu = dx / s, dt / s, eps / s
    steps = int(math.ceil(params.t_end / dt - 1e-9))

    conservative = params.form == "conservative"
    if params.scheme == "semi_implicit":
        r = nu * k / h**2
        ab = np.zeros((3, N))
        ab[0, 1:] = -r
        ab[1, :] = 1 + 2 * r
        ab[2, :-1] = -r

    times, values = [0.0], [U.copy()]
    mass0 = U.sum(axis=0) * dx
    boundary_in = np.zeros(model.n)  # time integral of the net inflow (original units)
    for step in range(steps):
        ext = np.vstack([left, U, right])
        if conservative:
            F = _flux_rows(model, ext)
            # alpha is frozen at the initial spectral radius; checked below
            Fh = 0.5 * (F[1:] + F[:-1]) - 0.5 * alpha * (ext[1:] - ext[:-1])
            transport = (Fh[1:] - Fh[:-1]) / h
        else:
            transport = _upwind_products(model, ext, h)[1:-1]
        if params.scheme == "explicit":
            Dh = nu * (ext[1:] - ext[:-1]) / h
            U_new = U - k * transport + k * (Dh[1:] - Dh[:-1]) / h
            if conservative:
                inflow = (Fh[0] - Dh[0]) - (Fh[-1] - Dh[-1])
        else:
            rhs = U - k * transport
            rhs[0] += r * left
            rhs[-1] += r * right
            U_new = solve_banded((1, 1), ab, rhs)
            if conservative:
                Dl = nu * (U_new[0] - left) / h
                Dr = nu * (right - U_new[-1]) / h
                inflow = (Fh[0] - Dl) - (Fh[-1] - Dr)
        if conservative:
            boundary_in += inflow * dt
        U = U_new
        if not np.all(np.isfinite(U)):
            raise StabilityViolation(f"non-finite values at step {step}")
        if (step + 1) % params.domain_check_every == 0 or step + 1 == steps:
            lo, hi = U.min(axis=0), U.max(axis=0)
            if np.any(lo < model.domain_lo - 1e-12) or np.any(hi > model.domain_hi + 1e-12):
                raise DomainViolation(f"viscous solution left the domain box at t={(step + 1) * dt:.4g}")
            if _spectral_radius(model, U, 32) > alpha * (1 + 1e-9) * 1.05:
                raise StabilityViolation("wave speeds grew beyond the frozen Rusanov bound")
        if (step + 1) % params.store_every == 0 or step + 1 == steps:
            times.append((step + 1) * dt)
            values.append(U.copy())
    meta = {
        "scheme": params.scheme,
        "form": params.form,
        "conservative": conservative,
        "epsilon": eps,
        "dt": dt,
        "alpha": alpha,
        "rescaled": rescaled,
    }
    if conservative:
        meta["mass_defect"] = (U.sum(axis=0) * dx - mass0 - boundary_in).tolist()
    return GridSolution(times, xs, values, dx, meta)


# ---------------------------------------------------------------- profiles


@dataclass
class TravelingProfile:
    sigma: float
    xi_grid: np.ndarray
    U_values: np.ndarray
    u_minus: np.ndarray
    u_plus: np.ndarray
    epsilon: float
    family: int = 1
    evaluate: Optional[Callable] = field(default=None, repr=False)

    def __call__(self, xi) -> np.ndarray:
        if self.evaluate is None:
            xi = np.atleast_1d(xi)
            return np.tile(self.u_minus, (xi.size, 1))
        return self.evaluate(xi)


def _rhs_field(model, u_minus, sigma, eps):
    f0 = model.f(u_minus)

    def g(_, U):
        return (model.f(U) - f0 - sigma * (U - u_minus)) / eps

    return g


def traveling_wave_profile(
    model: SystemModel,
    family: int,
    u_minus,
    amplitude: float,
    epsilon: float,
    delta0: float = 1e-8,
    n_grid: int = 801,
    tail_tol: float = 1e-13,
) -> TravelingProfile:
    """Viscous shock profile ``U(x - sigma t)`` joining ``u_minus`` to the shock state.

    The shock state lies on the Hugoniot branch at projection ``-amplitude``
    (the Lax side for a field oriented so that ``Dlambda . r > 0``).  The
    connecting orbit of ``eps U' = f(U) - f(u-) - sigma (U - u-)`` is the
    one-dimensional unstable manifold at ``u-`` when ``family == n``, and
    the one-dimensional stable manifold at ``u+`` when ``family == 1``; it
    is traced from a ``delta0`` offset along the matching eigenvector.
    """
    u_minus = model.check_domain(u_minus)
    n, i = model.n, family
    if not model.is_gn(i - 1):
        raise NotAdmissible(f"family {i} is not genuinely nonlinear")
    if amplitude < 0:
        raise NotAdmissible("negative amplitude selects the rarefaction side")
    if amplitude == 0:
        xi = np.linspace(-1.0, 1.0, n_grid) * epsilon
        lam = float(_eigenvalues(model, u_minus)[i - 1])
        return TravelingProfile(lam, xi, np.tile(u_minus, (n_grid, 1)), u_minus, u_minus.copy(), epsilon, i)
    u_plus, sigma = _hugoniot(model, i - 1, u_minus, -amplitude)
    if lax_admissible_family(model, u_minus, u_plus, sigma) != i:
        raise NotAdmissible("Hugoniot state is not Lax admissible")
    g = _rhs_field(model, u_minus, sigma, epsilon)
    jump = u_plus - u_minus

    if i == n:
        start, target, sign = u_minus, u_plus, 1.0
    elif i == 1:
        start, target, sign = u_plus, u_minus, -1.0
    else:
        raise ShootingFailure("profiles are computed for the first and last families only")
    es = eigen_decompose(model, start, check_domain=False)
    mu = (es.lambdas[i - 1] - sigma) / epsilon
    if sign * mu <= 0:
        raise ShootingFailure("no one-dimensional invariant manifold at the starting state")
    r = es.r(i - 1)
    r = r * np.sign(r @ (target - start))
    y0 = start + delta0 * np.linalg.norm(jump) * r
    amp = np.linalg.norm(jump)

    def arrived(_, U):
        return np.linalg.norm(U - target) - tail_tol * amp

    arrived.terminal = True
    span = sign * 200.0 * epsilon / max(abs(sigma - es.lambdas[i - 1]), 1e-12) * max(1.0, abs(math.log(delta0)))
    sol = solve_ivp(g, (0.0, span), y0, method="DOP853", rtol=1e-12, atol=1e-15 * max(amp, 1e-300), dense_output=True, events=arrived)
    if sol.status != 1:
        raise ShootingFailure(f"orbit did not reach the far state (status {sol.status}: {sol.message})")
    t_end = float(sol.t[-1])
    if np.linalg.norm(sol.y[:, -1] - target) > 1e-9 * amp:
        raise ShootingFailure("orbit missed the far state")

    proj = lambda s: (r @ (sol.sol(s) - start)) / (r @ (target - start)) - 0.5
    s_mid = brentq(proj, 0.0, t_end, xtol=1e-15 * max(1.0, abs(t_end)), rtol=1e-15) if t_end > 0 else brentq(
        proj, t_end, 0.0, xtol=1e-15 * max(1.0, abs(t_end)), rtol=1e-15
    )
    # far-end decay rate along the slowest approach direction
    lam_far = _eigenvalues(model, target) - sigma
    rates = lam_far / epsilon
    far_rate = sign * float(np.min(np.abs(rates[(sign * rates) < 0]))) if np.any(sign * rates < 0) else 0.0
    s_lo, s_hi = min(0.0, t_end), max(0.0, t_end)
    y_end = sol.y[:, -1]

    def evaluate(xi):
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        s = xi + s_mid  # orbit time of the autonomous ODE
        out = np.empty((xi.size, n))
        for k, sk in enumerate(s):
            if s_lo <= sk <= s_hi:
                out[k] = sol.sol(sk)
            elif (sk < s_lo and sign > 0) or (sk > s_hi and sign < 0):
                out[k] = start + (y0 - start) * math.exp(mu * sk)
            else:
                out[k] = target + (y_end - target) * math.exp(-abs(far_rate) * abs(sk - t_end))
        return out

    width = 12.0 * epsilon / max(abs(es.lambdas[i - 1] - sigma), 1e-12)
    xi_grid = np.linspace(-width, width, n_grid)
    U = evaluate(xi_grid)
    return TravelingProfile(float(sigma), xi_grid, U, u_minus, u_plus, epsilon, i, evaluate)


def profile_residual(model: SystemModel, prof: TravelingProfile) -> float:
    """Sup of ``|eps U' - (f(U) - f(u-) - sigma (U - u-))|`` on a fourth-order stencil."""
    h = prof.xi_grid[1] - prof.xi_grid[0]
    U = prof.U_values
    dU = (-U[4:] + 8 * U[3:-1] - 8 * U[1:-3] + U[:-4]) / (12 * h)
    f0 = model.f(prof.u_minus)
    G = np.array([model.f(u) - f0 - prof.sigma * (u - prof.u_minus) for u in U[2:-2]])
    return float(np.max(np.abs(prof.epsilon * dU - G)))


def profile_second_order_residual(model: SystemModel, prof: TravelingProfile) -> float:
    """Sup of ``|eps U'' - (A(U) - sigma) U'|`` with central differences."""
    h = prof.xi_grid[1] - prof.xi_grid[0]
    U = prof.U_values
    d1 = (U[2:] - U[:-2]) / (2 * h)
    d2 = (U[2:] - 2 * U[1:-1] + U[:-2]) / h**2
    res = [prof.epsilon * d2[k] - (model.A(U[k + 1]) - prof.sigma * np.eye(model.n)) @ d1[k] for k in range(len(d1))]
    return float(np.max(np.abs(res)))


# --------------------------------------------------------- convergence study


@dataclass(frozen=True)
class ViscosityRow:
    epsilon: float
    dx: float
    L1_distance: float
    bv_ratio: float


def grid_l1(u: np.ndarray, v: np.ndarray, dx: float) -> float:
    return float(np.sum(np.abs(u - v)) * dx)


def bv_ratio(sol: GridSolution) -> float:
    tv0 = sol.total_variation(0)
    if tv0 == 0:
        return 0.0
    return max(sol.total_variation(k) for k in range(len(sol.times))) / tv0


def vanishing_viscosity_study(
    model: SystemModel,
    u_bar: Callable,
    epsilon_list: Sequence[float],
    t_end: float,
    reference,
    x_span,
    window=None,
    dx_factor: float = 0.5,
    scheme: str = "explicit",
) -> List[ViscosityRow]:
    """L1 distance at ``t_end`` between viscous runs and a reference profile.

    ``reference`` is a ``FrontState`` at ``t_end`` or any object with
    ``positions`` and ``sample(xs)``.
    """
    from .fronts import FrontState, sample_solution

    if isinstance(reference, FrontState):
        ref_sample = lambda xs: sample_solution(reference, xs)
        ref_breaks = reference.positions
    else:
        ref_sample, ref_breaks = reference.sample, reference.positions
    rows = []
    for eps in epsilon_list:
        p = ViscousParams(eps, tuple(x_span), t_end, dx=dx_factor * eps, scheme=scheme, store_every=50)
        sol = parabolic_solve(model, u_bar, p)
        d = piecewise_l1(sol.edges, sol.values[-1], ref_sample, ref_breaks, window)
        rows.append(ViscosityRow(float(eps), float(p.mesh), d, bv_ratio(sol)))
    return rows


def write_viscosity_csv(rows: Sequence[ViscosityRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["epsilon", "dx", "L1_distance", "bv_ratio"])
        for r in rows:
            w.writerow([repr(r.epsilon), repr(r.dx), repr(r.L1_distance), repr(r.bv_ratio)])


@dataclass(frozen=True)
class StabilityCheck:
    ratio: float
    ratios: tuple
    degenerate: bool
    flagged: bool


def l1_stability_check(
    model: SystemModel,
    u_bar: Callable,
    v_bar: Callable,
    epsilon: float,
    t_grid: Sequence[float],
    x_span,
    L_claim: float = math.inf,
    dx: Optional[float] = None,
) -> StabilityCheck:
    """Largest ``||u(t) - v(t)|| / ||u(0) - v(0)||`` over ``t_grid``."""
    t_end = max(t_grid)
    p = ViscousParams(epsilon, tuple(x_span), t_end, dx=dx)
    # both runs must share the time step
    a, b = x_span
    xs = a + p.mesh * (np.arange(int(round((b - a) / p.mesh)) + 2) - 0.5)
    alpha = max(_spectral_radius(model, _initial_cells(g, xs, model.n)) for g in (u_bar, v_bar))
    p.dt = max_stable_dt(p.mesh, epsilon, max(alpha, 1e-12))
    su = parabolic_solve(model, u_bar, p)
    sv = parabolic_solve(model, v_bar, p)
    d0 = grid_l1(su.values[0], sv.values[0], su.dx)
    if d0 == 0.0:
        return StabilityCheck(0.0, tuple(0.0 for _ in t_grid), True, False)
    times = np.asarray(su.times)
    ratios = []
    for t in t_grid:
        k = int(np.argmin(np.abs(times - t)))
        ratios.append(grid_l1(su.values[k], sv.values[k], su.dx) / d0)
    ratio = max(ratios)
    return StabilityCheck(ratio, tuple(ratios), False, ratio > L_claim)


def time_regularity_constant(sol: GridSolution, epsilon: float, pairs: int = 40, seed: int = 0) -> float:
    """Measured L' in ``||u(t) - u(s)|| <= L' (|t - s| + |sqrt(eps t) - sqrt(eps s)|)``."""
    rng = np.random.default_rng(seed)
    m = len(sol.times)
    best = 0.0
    for _ in range(pairs):
        a, b = rng.choice(m, size=2, replace=False)
        t, s = sol.times[a], sol.times[b]
        denom = abs(t - s) + abs(math.sqrt(epsilon * t) - math.sqrt(epsilon * s))
        best = max(best, grid_l1(sol.values[a], sol.values[b], sol.dx) / denom)
    return best


# ------------------------------------------------------ Lyapunov functionals


def transversal_potential(z, z_star, c: float, dx: float) -> float:
    """Interaction potential between slow density ``z`` and fast density ``z_star``.

    ``(1/c) sum_{x1, x2} K(x2 - x1) |z(x1)| |z*(x2)| dx^2`` on a common grid,
    ``K(y) = exp(-c y / 2)`` for ``y > 0`` and ``1`` otherwise.  Linear time.
    """
    if not c > 0:
        raise NonPositiveGap(f"speed gap c={c} must be positive")
    a = np.abs(np.asarray(z, dtype=float))
    b = np.abs(np.asarray(z_star, dtype=float))
    near = np.sum(a * np.cumsum(b))  # x2 <= x1
    q = math.exp(-0.5 * c * dx)
    far = 0.0
    S = 0.0
    for j in range(len(b) - 1, 0, -1):
        S = q * (b[j] + S)  # sum_{k > j-1} q^{k-j+1} b_k
        far += a[j - 1] * S
    return float((near + far) * dx * dx / c)


def transversal_potential_bruteforce(z, z_star, c: float, dx: float) -> float:
    if not c > 0:
        raise NonPositiveGap(f"speed gap c={c} must be positive")
    a = np.abs(np.asarray(z, dtype=float))
    b = np.abs(np.asarray(z_star, dtype=float))
    idx = np.arange(len(a))
    y = (idx[None, :] - idx[:, None]) * dx  # x2 - x1
    K = np.where(y > 0, np.exp(-0.5 * c * np.maximum(y, 0.0)), 1.0)
    return float(a @ K @ b * dx * dx / c)


@dataclass
class TwoSpeedRun:
    times: np.ndarray
    potential: np.ndarray
    interaction_mass: float  # time integral of sum |z||z*| dx
    mass_product0: float  # (1/c) ||z(0)|| ||z*(0)||


def advection_diffusion_pair(z0, zs0, lam: float, lam_star: float, dx: float, t_end: float, store_every: int = 10) -> TwoSpeedRun:
    """Evolve ``z_t + lam z_x = z_xx`` and ``z*_t + lam* z*_x = z*_xx`` (zero padding)."""
    c = lam_star - lam
    if not c > 0:
        raise NonPositiveGap("fast speed must exceed slow speed")
    z = np.asarray(z0, dtype=float).copy()
    zs = np.asarray(zs0, dtype=float).copy()
    alpha = max(abs(lam), abs(lam_star))
    if alpha * dx > 2.0:
        raise StabilityViolation(f"cell Peclet number {alpha * dx / 2:.3g} exceeds 1")
    dt = max_stable_dt(dx, 1.0, alpha)
    steps = int(math.ceil(t_end / dt))

    def step(u, s):
        ext = np.concatenate([[0.0], u, [0.0]])
        # central transport: no numerical diffusion, monotone while |s| dx <= 2
        Fh = 0.5 * s * (ext[1:] + ext[:-1])
        Dh = (ext[1:] - ext[:-1]) / dx
        return u - dt / dx * (Fh[1:] - Fh[:-1]) + dt / dx * (Dh[1:] - Dh[:-1])

    Q = [transversal_potential(z, zs, c, dx)]
    times = [0.0]
    mass = 0.0
    m0 = np.sum(np.abs(z)) * dx * np.sum(np.abs(zs)) * dx / c
    for k in range(steps):
        prod_before = np.sum(np.abs(z) * np.abs(zs)) * dx
        z, zs = step(z, lam), step(zs, lam_star)
        mass += 0.5 * dt * (prod_before + np.sum(np.abs(z) * np.abs(zs)) * dx)
        if (k + 1) % store_every == 0 or k + 1 == steps:
            times.append((k + 1) * dt)
            Q.append(transversal_potential(z, zs, c, dx))
    return TwoSpeedRun(np.array(times), np.array(Q), float(mass), float(m0))


@dataclass
class PlaneCurve:
    """Tangent field ``gamma_x = (v, w)`` with ``v = u_x`` and ``w = -u_t``."""

    v: np.ndarray
    w: np.ndarray

    @classmethod
    def from_scalar(cls, model: SystemModel, u: np.ndarray, dx: float, epsilon: float, left=None, right=None) -> "PlaneCurve":
        """Build the curve of a scalar profile; ``w = g'(u) u_x - eps u_xx`` on the central stencil."""
        u = np.asarray(u, dtype=float).reshape(-1)
        left = u[0] if left is None else float(np.asarray(left).reshape(-1)[0])
        right = u[-1] if right is None else float(np.asarray(right).reshape(-1)[0])
        ext = np.concatenate([[left], u, [right]])
        ux = (ext[2:] - ext[:-2]) / (2 * dx)
        uxx = (ext[2:] - 2 * ext[1:-1] + ext[:-2]) / dx**2
        gp = np.array([model.A(np.array([x]))[0, 0] for x in u])
        return cls(ux, gp * ux - epsilon * uxx)


def curve_length(curve: PlaneCurve, dx: float) -> float:
    return float(np.sum(np.hypot(curve.v, curve.w)) * dx)


def area_potential(curve: PlaneCurve, dx: float, block: int = 2048) -> float:
    """Half the double sum over ``x < x'`` of ``|v(x) w(x') - w(x) v(x')|``."""
    v, w = np.asarray(curve.v, dtype=float), np.asarray(curve.w, dtype=float)
    n = len(v)
    total = 0.0
    for s in range(0, n, block):
        e = min(n, s + block)
        wedge = np.abs(v[s:e, None] * w[None, :] - w[s:e, None] * v[None, :])
        rows = np.arange(s, e)[:, None]
        cols = np.arange(n)[None, :]
        total += float(np.sum(wedge[cols > rows]))
    return 0.5 * total * dx * dx


def swept_area_rate(curve: PlaneCurve, dx: float, epsilon: float) -> float:
    """``eps * integral |v_x w - v w_x| dx`` (rate at which the curve sweeps area)."""
    vx = np.gradient(curve.v, dx)
    wx = np.gradient(curve.w, dx)
    return float(epsilon * np.sum(np.abs(vx * curve.w - curve.v * wx)) * dx)


@dataclass
class CurveSeries:
    times: np.ndarray
    length: np.ndarray
    area: np.ndarray
    swept: np.ndarray  # cumulative swept area (trapezoid in time)


def curve_functionals(model: SystemModel, sol: GridSolution, epsilon: float, left=None, right=None) -> CurveSeries:
    L, Qg, rate = [], [], []
    for U in sol.values:
        cur = PlaneCurve.from_scalar(model, U[:, 0], sol.dx, epsilon, left, right)
        L.append(curve_length(cur, sol.dx))
        Qg.append(area_potential(cur, sol.dx))
        rate.append(swept_area_rate(cur, sol.dx, epsilon))
    t = np.asarray(sol.times)
    rate = np.asarray(rate)
    swept = np.concatenate([[0.0], np.cumsum(0.5 * (rate[1:] + rate[:-1]) * np.diff(t))])
    return CurveSeries(t, np.asarray(L), np.asarray(Qg), swept)
