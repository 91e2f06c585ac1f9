"""Ground eigenvalue of the full Hamiltonian and the diagnostics built on it.

The planar operator splits into angular modes; the ground eigenvalue is the
minimum over modes of the lowest radial eigenvalue. Circulations are always
reduced to their canonical representative before assembly, with the integer
part absorbed into a mode relabeling, so that values related by an integer
shift (or by reflection) are computed from bitwise-identical matrices.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .eigensolve import inverse_iteration, lowest_k
from .errors import (ABSpectraError, DomainError, InconclusiveError, InconsistencyError,
                     InvalidArgumentError, ModeRangeError, UndefinedDerivativeError)
from .model import NumericsConfig, PotentialSpec, RadialMesh, build_mesh, split_circulation
from .radial import assemble_tridiagonal, quadratic_form, reconstruct_radial

THREADS_ENV = "AB_SPECTRA_THREADS"
MAX_MODE_DOUBLINGS = 4
MAX_RADIUS_EXPANSIONS = 10
COARSE_NODES = 400
FINE_TOL = 1e-14


@dataclass(frozen=True)
class GroundState:
    kappa: float
    lambda1: float
    mode_star: int
    g: np.ndarray = field(repr=False)
    mesh: RadialMesh
    spec: PotentialSpec
    mode_energies: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def kappa_canonical(self) -> float:
        return split_circulation(self.kappa)[1]

    @property
    def psi(self) -> np.ndarray:
        """Radial profile ``f = g/sqrt(r)`` normalized so that ``int f^2 r dr = 1``."""
        return reconstruct_radial(self.mesh, self.g) / math.sqrt(self.mesh.h)


@dataclass
class SweepResult:
    kappas: list
    lambdas: list
    modes: list
    hf_derivs: list
    fd_derivs: list

    def __len__(self):
        return len(self.kappas)


def mode_ground_energy(kappa: float, mode: int, spec: PotentialSpec, mesh: RadialMesh,
                       tol: float = 1e-10) -> float:
    """Lowest eigenvalue of the radial operator for angular mode ``mode``."""
    return lowest_k(assemble_tridiagonal(kappa, mode, spec, mesh), 1, tol)[0]


def _mode_energies(kappa: float, spec: PotentialSpec, mesh: RadialMesh, M: int,
                   tol: float) -> tuple[int, float, dict]:
    """Per-mode energies around the canonical circulation.

    Returns ``(shift, kc, {relative_mode: energy})``; the absolute mode is
    ``shift + relative_mode``. The window is doubled while the minimizer sits
    on its edge.
    """
    shift, kc = split_circulation(kappa)
    energies: dict = {}
    for _ in range(MAX_MODE_DOUBLINGS + 1):
        for j in range(-M, M + 1):
            if j not in energies:
                energies[j] = mode_ground_energy(kc, j, spec, mesh, tol)
        j_star = _argmin_mode({j: energies[j] for j in range(-M, M + 1)})
        if abs(j_star) < M:
            return shift, kc, energies
        M *= 2
    raise ModeRangeError(f"minimizing mode stays on the window edge at kappa={kappa} (M={M // 2})")


def _argmin_mode(energies: dict) -> int:
    return min(energies, key=lambda j: (energies[j], abs(j), j))


def _ground_energy(kappa: float, spec: PotentialSpec, mesh: RadialMesh, M: int,
                   tol: float) -> float:
    _, _, energies = _mode_energies(kappa, spec, mesh, M, tol)
    return energies[_argmin_mode(energies)]


def adaptive_outer_radius(kappa: float, spec: PotentialSpec, cfg: NumericsConfig) -> float:
    """Outer truncation radius beyond which the ground eigenvalue is stable.

    A coarse solve at ``R = a + 10`` estimates the eigenvalue, which sets the
    starting radius from the classically allowed region of the confinement.
    The radius is then grown by ``cfg.R_growth`` at a fixed mesh spacing until
    the eigenvalue moves by less than ``cfg.R_tol`` (relative); the smaller
    radius of the final pair is returned.
    """
    a = spec.a
    _, kc = split_circulation(kappa)
    est_mesh = build_mesh(a, a + 10.0, COARSE_NODES)
    lam_est = _ground_energy(kc, spec, est_mesh, cfg.M, FINE_TOL)
    R = a + 3.0 * (max(lam_est, 1e-12) / spec.omega) ** (1.0 / spec.q)
    h = (R - a) / (COARSE_NODES + 1)

    lam = _ground_energy(kc, spec, build_mesh(a, R, COARSE_NODES), cfg.M, FINE_TOL)
    for _ in range(MAX_RADIUS_EXPANSIONS):
        n_next = max(int(round((cfg.R_growth * R - a) / h)) - 1, COARSE_NODES + 1)
        R_next = a + (n_next + 1) * h
        lam_next = _ground_energy(kc, spec, build_mesh(a, R_next, n_next), cfg.M, FINE_TOL)
        if abs(lam_next - lam) < cfg.R_tol * abs(lam):
            return R
        R, lam = R_next, lam_next
    raise DomainError(f"ground eigenvalue did not stabilize after {MAX_RADIUS_EXPANSIONS} "
                      f"radius expansions (last R = {R:.6g})")


def default_mesh(kappa: float, spec: PotentialSpec, cfg: NumericsConfig,
                 n: int | None = None) -> RadialMesh:
    R = adaptive_outer_radius(kappa, spec, cfg)
    return build_mesh(spec.a, R, cfg.n_default if n is None else n)


def ground_state(kappa: float, spec: PotentialSpec, cfg: NumericsConfig | None = None,
                 mesh: RadialMesh | None = None) -> GroundState:
    """Ground eigenvalue, minimizing mode and real radial eigenvector at ``kappa``.

    The eigenvalue reported is the Rayleigh quotient of the inverse-iteration
    eigenvector, evaluated in differenced form; bisection only selects the mode.
    """
    cfg = cfg or NumericsConfig()
    if mesh is None:
        mesh = default_mesh(kappa, spec, cfg)
    shift, kc, energies = _mode_energies(kappa, spec, mesh, cfg.M, cfg.eig_tol)
    j_star = _argmin_mode(energies)
    T = assemble_tridiagonal(kc, j_star, spec, mesh)
    pair = inverse_iteration(T, energies[j_star], residual_tol=1e-12 * T.norm_inf())
    lam = quadratic_form(T, pair.vector)
    return GroundState(
        kappa=float(kappa),
        lambda1=lam,
        mode_star=shift + j_star,
        g=pair.vector,
        mesh=mesh,
        spec=spec,
        mode_energies={shift + j: v for j, v in sorted(energies.items())},
    )


def _check_derivative_defined(kc: float, deg_tol: float):
    if abs(kc) <= deg_tol:
        raise UndefinedDerivativeError("derivative undefined at integer circulation (endpoint)")
    if abs(kc) >= 0.5 - deg_tol:
        raise UndefinedDerivativeError("derivative undefined at half-integer circulation "
                                       "(degenerate ground state)")


def hf_derivative(gs: GroundState, deg_tol: float = 1e-8) -> float:
    """``d lambda1 / d kappa`` as the expectation of the derivative of the operator.

    For the minimizing mode ``m`` this is ``-2 (m - kappa) sum(g_i^2 / r_i^2)``,
    i.e. ``2 kc ||psi/|z|||^2`` on the ``m = 0`` branch of the canonical circulation.
    """
    shift, kc = split_circulation(gs.kappa)
    _check_derivative_defined(kc, deg_tol)
    j_star = gs.mode_star - shift
    weight = float(np.sum(gs.g**2 / gs.mesh.nodes**2) / np.sum(gs.g**2))
    return -2.0 * (j_star - kc) * weight


def fd_derivative(kappa: float, h: float, spec: PotentialSpec,
                  cfg: NumericsConfig | None = None, mesh: RadialMesh | None = None) -> float:
    """Central difference ``(lambda1(kappa+h) - lambda1(kappa-h)) / 2h`` on one mesh."""
    cfg = cfg or NumericsConfig()
    if not h > 0:
        raise InvalidArgumentError("finite-difference step must be positive")
    _, kc = split_circulation(kappa)
    if not (-0.5 < kc - h and kc + h < 0.5):
        raise InvalidArgumentError(f"stencil [{kc - h}, {kc + h}] leaves the nondegenerate "
                                   "interval (-1/2, 1/2)")
    if mesh is None:
        mesh = default_mesh(kappa, spec, cfg)
    up = ground_state(kappa + h, spec, cfg, mesh).lambda1
    down = ground_state(kappa - h, spec, cfg, mesh).lambda1
    return (up - down) / (2.0 * h)


def degeneracy_multiplicity(kappa: float, spec: PotentialSpec,
                            cfg: NumericsConfig | None = None,
                            mesh: RadialMesh | None = None) -> tuple[int, list[int]]:
    """Number of angular modes sharing the ground eigenvalue, and which modes."""
    cfg = cfg or NumericsConfig()
    if mesh is None:
        mesh = default_mesh(kappa, spec, cfg)
    shift, _, energies = _mode_energies(kappa, spec, mesh, cfg.M, cfg.eig_tol)
    lam = min(energies.values())
    cut = cfg.deg_tol * max(1.0, abs(lam))
    modes = sorted(shift + j for j, v in energies.items() if v - lam <= cut)
    return len(modes), modes


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise InvalidArgumentError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return min(4, os.cpu_count() or 1)


def sweep(kappa_from: float, kappa_to: float, steps: int, spec: PotentialSpec,
          cfg: NumericsConfig | None = None, fd_h: float = 1e-4,
          threads: int | None = None) -> SweepResult:
    """Ground eigenvalue on a uniform circulation grid, sharing one mesh.

    Derivative columns are ``None`` where undefined (integer and half-integer
    circulations for the Hellmann-Feynman value, stencils crossing a
    half-integer for the finite difference).
    """
    cfg = cfg or NumericsConfig()
    if int(steps) != steps or steps < 2:
        raise InvalidArgumentError("a sweep needs at least 2 steps")
    kappas = [float(k) for k in np.linspace(kappa_from, kappa_to, int(steps))]
    R = max(adaptive_outer_radius(kappa_from, spec, cfg),
            adaptive_outer_radius(kappa_to, spec, cfg))
    mesh = build_mesh(spec.a, R, cfg.n_default)

    def point(kappa):
        try:
            gs = ground_state(kappa, spec, cfg, mesh)
            try:
                hf = hf_derivative(gs, cfg.deg_tol)
            except UndefinedDerivativeError:
                hf = None
            try:
                fd = fd_derivative(kappa, fd_h, spec, cfg, mesh)
            except InvalidArgumentError:
                fd = None
        except ABSpectraError as exc:
            raise type(exc)(f"sweep failed at kappa={kappa!r}: {exc}") from exc
        return gs.lambda1, gs.mode_star, hf, fd

    workers = threads or _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(point, kappas))
    else:
        rows = [point(k) for k in kappas]
    lambdas, modes, hfs, fds = (list(col) for col in zip(*rows))
    return SweepResult(kappas, lambdas, modes, hfs, fds)


@dataclass(frozen=True)
class NodalRayReport:
    max_on_ray: float
    min_off_ray: float
    radii: np.ndarray = field(repr=False)
    f: np.ndarray = field(repr=False)
    modes: tuple = ()


def degenerate_combination(f, theta):
    """``psi(r, theta) = f(r) (1 + exp(i theta)) / 2`` on the grid ``f x theta``."""
    theta = np.asarray(theta, dtype=float)
    return np.multiply.outer(np.asarray(f), (1.0 + np.exp(1j * theta)) / 2.0)


def nodal_ray_check(spec: PotentialSpec, cfg: NumericsConfig | None = None,
                    mesh: RadialMesh | None = None) -> NodalRayReport:
    """Nodal structure of the degenerate ground state at half-integer circulation.

    The combination of modes 0 and 1 vanishes on the ray ``theta = pi``. Angles
    are sampled on quarter turns, where the phase ``exp(i theta)`` is exactly
    ``1, i, -1``.
    """
    cfg = cfg or NumericsConfig()
    if mesh is None:
        mesh = default_mesh(0.5, spec, cfg)
    mult, modes = degeneracy_multiplicity(0.5, spec, cfg, mesh)
    if mult != 2 or modes != [0, 1]:
        raise InconsistencyError(f"expected a doubly degenerate ground state at kappa=1/2, "
                                 f"found modes {modes}")
    gs = ground_state(0.5, spec, cfg, mesh)
    f = gs.psi
    quarter_phase = {0: 1.0 + 0j, 1: 1j, 2: -1.0 + 0j}
    psi = {k: f * (1.0 + ph) / 2.0 for k, ph in quarter_phase.items()}
    on_ray = float(np.max(np.abs(psi[2])))
    bulk = np.abs(f) > 0.1 * np.max(np.abs(f))
    off_ray = float(min(np.min(np.abs(psi[0][bulk])), np.min(np.abs(psi[1][bulk]))))
    return NodalRayReport(on_ray, off_ray, mesh.nodes, f, tuple(modes))


@dataclass(frozen=True)
class ConvergenceStudy:
    n_list: tuple
    lambdas: tuple
    order: float
    extrapolated: float


def convergence_study(kappa: float, spec: PotentialSpec, cfg: NumericsConfig | None = None,
                      n_list=(1000, 2000, 4000), R: float | None = None) -> ConvergenceStudy:
    """Observed order ``log2((l_n - l_2n)/(l_2n - l_4n))`` from the last three sizes."""
    cfg = cfg or NumericsConfig()
    n_list = tuple(int(n) for n in n_list)
    if len(n_list) < 3:
        raise InvalidArgumentError("need at least three mesh sizes")
    if any(b != 2 * a for a, b in zip(n_list, n_list[1:])):
        raise InvalidArgumentError("mesh sizes must grow by a factor of 2")
    if R is None:
        R = adaptive_outer_radius(kappa, spec, cfg)
    lams = tuple(ground_state(kappa, spec, cfg, build_mesh(spec.a, R, n)).lambda1
                 for n in n_list)
    d1 = lams[-3] - lams[-2]
    d2 = lams[-2] - lams[-1]
    if d2 == 0 or d1 / d2 <= 0:
        raise InconclusiveError(f"non-monotone refinement differences {d1:.3e}, {d2:.3e}")
    order = math.log2(d1 / d2)
    extrapolated = lams[-1] - d2 / 3.0
    return ConvergenceStudy(n_list, lams, order, extrapolated)


def convergence_order(kappa: float, spec: PotentialSpec, cfg: NumericsConfig | None = None,
                      n_list=(1000, 2000, 4000)) -> float:
    return convergence_study(kappa, spec, cfg, n_list).order
