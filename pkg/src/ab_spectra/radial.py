"""Angular-mode reduction of the Hamiltonian and its tridiagonal discretization.

Each angular mode ``m`` of the planar operator reduces, after the substitution
``g = sqrt(r) f``, to ``-g'' + W g`` with

    W(r) = ((m - kappa)**2 - 1/4) / r**2 + V(r),

which is discretized by the three-point second difference on a uniform mesh
with homogeneous values at both ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidArgumentError
from .model import PotentialSpec, RadialMesh, evaluate_potential


def centrifugal_factor(kappa: float, mode: int) -> float:
    return (mode - kappa) ** 2


def effective_potential(kappa: float, mode: int, spec: PotentialSpec, r):
    """Liouville-gauge potential ``((mode-kappa)^2 - 1/4)/r^2 + V(r)``."""
    r = np.asarray(r, dtype=float)
    if np.any(~(r > spec.a)):
        raise DomainError(f"effective potential is defined only for r > a = {spec.a}")
    w = (centrifugal_factor(kappa, mode) - 0.25) / r**2 + evaluate_potential(spec, r)
    return float(w) if np.ndim(w) == 0 else w


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix with diagonal ``d`` and off-diagonal ``e``.

    ``mesh``, ``mode`` and ``kappa`` are set for assembled radial operators and
    left as ``None`` for bare matrices (tests, oracles).
    """

    d: np.ndarray
    e: np.ndarray
    mesh: RadialMesh | None = None
    mode: int | None = None
    kappa: float | None = None
    positive_diagonal: bool = field(init=False)

    def __post_init__(self):
        d = np.ascontiguousarray(self.d, dtype=float)
        e = np.ascontiguousarray(self.e, dtype=float)
        if d.ndim != 1 or d.size < 1 or e.shape != (d.size - 1,):
            raise InvalidArgumentError("need d of length n >= 1 and e of length n-1")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise InvalidArgumentError("matrix entries must be finite")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "positive_diagonal", bool(np.all(d > 0)))

    @classmethod
    def from_arrays(cls, d, e) -> "TridiagonalOperator":
        return cls(np.asarray(d, dtype=float), np.asarray(e, dtype=float))

    @property
    def n(self) -> int:
        return self.d.size

    def norm_inf(self) -> float:
        row = np.abs(self.d).copy()
        row[:-1] += np.abs(self.e)
        row[1:] += np.abs(self.e)
        return float(row.max())

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.d * x
        y[:-1] += self.e * x[1:]
        y[1:] += self.e * x[:-1]
        return y

    def to_dense(self) -> np.ndarray:
        return np.diag(self.d) + np.diag(self.e, 1) + np.diag(self.e, -1)

    def is_positive_definite(self) -> bool:
        from .eigensolve import sturm_count

        return sturm_count(self, 0.0) == 0


def assemble_tridiagonal(kappa: float, mode: int, spec: PotentialSpec,
                         mesh: RadialMesh) -> TridiagonalOperator:
    """Radial mode operator ``d_i = 2/h^2 + W(r_i)``, ``e_i = -1/h^2``."""
    if mesh.a != spec.a:
        raise InvalidArgumentError(f"mesh inner radius {mesh.a} differs from a = {spec.a}")
    inv_h2 = 1.0 / (mesh.h * mesh.h)
    d = 2.0 * inv_h2 + effective_potential(kappa, mode, spec, mesh.nodes)
    e = np.full(mesh.n - 1, -inv_h2)
    return TridiagonalOperator(np.atleast_1d(d), e, mesh=mesh, mode=int(mode), kappa=float(kappa))


def quadratic_form(T: TridiagonalOperator, g: np.ndarray) -> float:
    """``g^T T g`` for an assembled radial operator, in differenced form.

    Written as ``sum((g_{i+1}-g_i)^2)/h^2 + sum(W_i g_i^2)`` (with the Dirichlet
    end values), which avoids the cancellation between the large stencil
    diagonal and the off-diagonal. Falls back to the plain product for bare
    matrices without a mesh.
    """
    g = np.asarray(g, dtype=float)
    if T.mesh is None:
        return float(g @ T.matvec(g))
    inv_h2 = 1.0 / (T.mesh.h * T.mesh.h)
    w = T.d - 2.0 * inv_h2
    padded = np.concatenate(([0.0], g, [0.0]))
    kinetic = np.sum(np.diff(padded) ** 2) * inv_h2
    return float(kinetic + np.sum(w * g * g))


def rayleigh_quotient(kappa: float, mode: int, spec: PotentialSpec, mesh: RadialMesh,
                      g) -> float:
    """Discrete energy ``g^T T g / g^T g`` of ``g`` in angular mode ``mode``."""
    g = np.asarray(g, dtype=float)
    if g.shape != (mesh.n,):
        raise InvalidArgumentError(f"vector length {g.shape} does not match mesh size {mesh.n}")
    norm2 = float(g @ g)
    if norm2 == 0.0:
        raise InvalidArgumentError("Rayleigh quotient of the zero vector")
    T = assemble_tridiagonal(kappa, mode, spec, mesh)
    return quadratic_form(T, g) / norm2


def reconstruct_radial(mesh: RadialMesh, g: np.ndarray) -> np.ndarray:
    """Undo the Liouville substitution: ``f = g / sqrt(r)``."""
    return np.asarray(g) / np.sqrt(mesh.nodes)
