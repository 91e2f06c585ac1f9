"""Brute-force planar discretization used to cross-check the mode-by-mode solver.

The unknowns live on a polar grid ``(r_i, theta_j)`` over the truncated
annulus, in the Liouville gauge ``u = sqrt(r) psi``. The radial part is the
same three-point stencil as the mode solver; the angular part discretizes
``(1/r^2) (i d/dtheta + kappa)^2`` with a magnetic phase on each angular link,

    (1/(r^2 dtheta^2)) (2 u_j - e^{-i kappa dtheta} u_{j+1} - e^{i kappa dtheta} u_{j-1}),

which is Hermitian, reduces to the real Laplacian at ``kappa = 0`` and is
exactly covariant under the grid gauge multiplier ``e^{i theta_j}``.
The lowest eigenvalues come from inverse power iteration with conjugate
gradient solves, independent of the Sturm-bisection path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import ConvergenceError, InvalidArgumentError
from .model import NumericsConfig, PotentialSpec, RadialMesh, build_mesh
from .radial import effective_potential

MIN_NR = 16
MIN_NTHETA = 8


@numba.njit(cache=True, nogil=True)
def _apply(diag, off_r, c, phase, u, out):
    n_r, n_t = u.shape
    pc = np.conj(phase)
    for i in range(n_r):
        for j in range(n_t):
            jp = j + 1 if j + 1 < n_t else 0
            jm = j - 1 if j > 0 else n_t - 1
            acc = (diag[i] + 2.0 * c[i]) * u[i, j]
            acc -= c[i] * (phase * u[i, jp] + pc * u[i, jm])
            if i > 0:
                acc += off_r * u[i - 1, j]
            if i + 1 < n_r:
                acc += off_r * u[i + 1, j]
            out[i, j] = acc


@numba.njit(cache=True, nogil=True)
def _vdot(a, b):
    s = 0j
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            s += np.conj(a[i, j]) * b[i, j]
    return s


@numba.njit(cache=True, nogil=True)
def _cg(diag, off_r, c, phase, b, x, rtol, maxiter):
    r = np.empty_like(b)
    ap = np.empty_like(b)
    _apply(diag, off_r, c, phase, x, ap)
    r[:, :] = b - ap
    p = r.copy()
    rr = _vdot(r, r).real
    bnorm = np.sqrt(_vdot(b, b).real)
    target = rtol * bnorm
    if np.sqrt(rr) <= target:
        return 0, np.sqrt(rr) / bnorm
    for it in range(1, maxiter + 1):
        _apply(diag, off_r, c, phase, p, ap)
        pap = _vdot(p, ap).real
        if pap <= 0.0:
            return -it, np.sqrt(rr) / bnorm
        alpha = rr / pap
        x += alpha * p
        r -= alpha * ap
        rr_new = _vdot(r, r).real
        if np.sqrt(rr_new) <= target:
            return it, np.sqrt(rr_new) / bnorm
        p *= rr_new / rr
        p += r
        rr = rr_new
    return maxiter + 1, np.sqrt(rr) / bnorm


@dataclass(frozen=True)
class HermitianGridOperator:
    """Matrix-free planar operator on an ``n_r x n_theta`` polar grid."""

    kappa: float
    mesh: RadialMesh
    n_theta: int
    diag: np.ndarray = field(repr=False)
    off_r: float = field(repr=False)
    c: np.ndarray = field(repr=False)
    phase: complex = field(repr=False)

    @property
    def n_r(self) -> int:
        return self.mesh.n

    @property
    def shape(self) -> tuple[int, int]:
        return (self.mesh.n, self.n_theta)

    @property
    def size(self) -> int:
        return self.mesh.n * self.n_theta

    @property
    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta

    def apply(self, u: np.ndarray) -> np.ndarray:
        """``T u`` for ``u`` of shape ``(n_r, n_theta)`` or flat length ``n_r*n_theta``."""
        flat = u.ndim == 1
        grid = np.ascontiguousarray(np.reshape(u, self.shape), dtype=complex)
        out = np.empty_like(grid)
        _apply(self.diag, self.off_r, self.c, self.phase, grid, out)
        return out.ravel() if flat else out

    __matmul__ = apply

    def rayleigh(self, u: np.ndarray) -> float:
        u = np.asarray(u, dtype=complex)
        return float(np.vdot(u, self.apply(u)).real / np.vdot(u, u).real)

    def solve(self, b: np.ndarray, x0: np.ndarray | None = None, rtol: float = 1e-12,
              maxiter: int | None = None) -> np.ndarray:
        """Conjugate-gradient solution of ``T x = b`` (grid-shaped arrays)."""
        b = np.ascontiguousarray(b, dtype=complex)
        x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=complex)
        maxiter = maxiter or 20 * self.size
        its, relres = _cg(self.diag, self.off_r, self.c, self.phase, b, x, rtol, maxiter)
        if its < 0:
            raise ConvergenceError(f"CG breakdown after {-its} steps: operator not positive "
                                   "definite", residual=relres)
        if its > maxiter:
            raise ConvergenceError(f"CG did not converge in {maxiter} steps "
                                   f"(relative residual {relres:.3e})", residual=relres)
        return x


def assemble_2d(kappa: float, spec: PotentialSpec, n_r: int, n_theta: int,
                R: float) -> HermitianGridOperator:
    if int(n_r) != n_r or n_r < MIN_NR:
        raise InvalidArgumentError(f"n_r must be an integer >= {MIN_NR}, got {n_r}")
    if int(n_theta) != n_theta or n_theta < MIN_NTHETA or n_theta % 2:
        raise InvalidArgumentError(f"n_theta must be an even integer >= {MIN_NTHETA}, "
                                   f"got {n_theta}")
    mesh = build_mesh(spec.a, R, int(n_r))
    inv_h2 = 1.0 / (mesh.h * mesh.h)
    dtheta = 2.0 * np.pi / n_theta
    r = mesh.nodes
    # kappa-free radial part; identical to the radial mode-0 diagonal at kappa = 0
    diag = 2.0 * inv_h2 + effective_potential(0.0, 0, spec, r)
    c = 1.0 / (r * r * dtheta * dtheta)
    phase = complex(np.exp(-1j * kappa * dtheta))
    return HermitianGridOperator(float(kappa), mesh, int(n_theta), np.ascontiguousarray(diag),
                                 -inv_h2, np.ascontiguousarray(c), phase)


def hermiticity_residual(T: HermitianGridOperator, u: np.ndarray, v: np.ndarray) -> float:
    """``|<Tu, v> - <u, Tv>| / (||Tu|| ||v|| + ||u|| ||Tv||)``."""
    tu, tv = T.apply(u), T.apply(v)
    num = abs(np.vdot(tu, v) - np.vdot(u, tv))
    den = np.linalg.norm(tu) * np.linalg.norm(v) + np.linalg.norm(u) * np.linalg.norm(tv)
    return float(num / den)


def gauge_multiplier(T: HermitianGridOperator, u: np.ndarray, m: int = 1) -> np.ndarray:
    """Apply the grid gauge transformation ``u_ij -> e^{i m theta_j} u_ij``."""
    grid = np.reshape(u, T.shape)
    out = grid * np.exp(1j * m * T.thetas)[None, :]
    return out.ravel() if np.ndim(u) == 1 else out


def _start_vector(T: HermitianGridOperator, level: int = 0) -> np.ndarray:
    i = np.arange(1, T.n_r + 1)
    j = np.arange(T.n_theta)
    radial = np.sin(np.pi * i / (T.n_r + 1))
    # deterministic chirp with every angular Fourier mode present; the rate
    # differs per deflation level so a degenerate partner is not projected out
    angular = 1.0 + np.exp(1j * (0.37 + 0.21 * level) * j * j)
    u = np.multiply.outer(radial, angular)
    return u / np.linalg.norm(u)


def lowest_eigenvalues_2d(T: HermitianGridOperator, k: int = 1, tol: float = 1e-11,
                          max_iter: int = 5000, cg_rtol: float = 1e-12) -> list[float]:
    """The ``k`` lowest eigenvalues by deflated inverse power iteration.

    Each iteration solves ``T x = u`` by CG, warm-started from ``u / rho``.
    Later vectors are kept orthogonal to the previously converged ones.
    Converged when successive Rayleigh quotients differ by less than ``tol``
    relative.
    """
    found: list[np.ndarray] = []
    values: list[float] = []
    for level in range(k):
        u = _start_vector(T, level)
        rho_prev = None
        for it in range(max_iter):
            for w in found:
                u -= np.vdot(w, u) * w
            u /= np.linalg.norm(u)
            rho = T.rayleigh(u)
            if rho <= 0:
                raise ConvergenceError(f"non-positive Rayleigh quotient {rho:.3e}; "
                                       "operator is not positive definite")
            if rho_prev is not None and abs(rho - rho_prev) < tol * abs(rho):
                break
            rho_prev = rho
            u = T.solve(u, x0=u / rho, rtol=cg_rtol)
        else:
            raise ConvergenceError(f"inverse power iteration did not converge in {max_iter} "
                                   f"steps (last Rayleigh quotient {rho:.12g})",
                                   residual=abs(rho - rho_prev))
        found.append(u)
        values.append(rho)
    return values


def lowest_eigenvalue_2d(T: HermitianGridOperator, tol: float = 1e-11) -> float:
    return lowest_eigenvalues_2d(T, 1, tol)[0]


@dataclass(frozen=True)
class OracleComparison:
    kappa: float
    n_r: int
    n_theta: int
    R: float
    lambda_2d: float
    lambda_radial: float
    discrepancy: float
    lambda_2d_refined: float | None = None
    discrepancy_refined: float | None = None


def compare_with_radial(kappa: float, spec: PotentialSpec, cfg: NumericsConfig | None = None,
                        n_r: int = 200, n_theta: int = 64, refine: bool = True,
                        R: float | None = None, tol: float = 1e-11) -> OracleComparison:
    """Relative gap between the planar and mode-by-mode ground eigenvalues.

    Both use the same radial mesh. With ``refine`` the planar solve is
    repeated at twice the angular resolution.
    """
    from .spectrum import adaptive_outer_radius, ground_state

    cfg = cfg or NumericsConfig()
    if R is None:
        R = adaptive_outer_radius(kappa, spec, cfg)
    T = assemble_2d(kappa, spec, n_r, n_theta, R)
    lam_radial = ground_state(kappa, spec, cfg, T.mesh).lambda1
    lam_2d = lowest_eigenvalue_2d(T, tol)
    disc = abs(lam_2d - lam_radial) / abs(lam_radial)
    lam_ref = disc_ref = None
    if refine:
        lam_ref = lowest_eigenvalue_2d(assemble_2d(kappa, spec, n_r, 2 * n_theta, R), tol)
        disc_ref = abs(lam_ref - lam_radial) / abs(lam_radial)
    return OracleComparison(float(kappa), int(n_r), int(n_theta), R, lam_2d, lam_radial, disc,
                            lam_ref, disc_ref)
