"""Circulation of curl-free planar fields and the gauge-quantum-related criterion."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidArgumentError
from .model import PotentialSpec, RadialMesh
from .radial import assemble_tridiagonal

DEFAULT_N_QUAD = 64
DEFAULT_GQR_TOL = 1e-9


@dataclass(frozen=True)
class PlanarFieldSampler:
    """A smooth planar vector field valid on ``|z| > a``.

    ``evaluator(x, y)`` takes coordinate arrays and returns the pair ``(Ax, Ay)``.
    """

    evaluator: Callable
    a: float

    def __call__(self, x, y):
        return self.evaluator(x, y)

    def __add__(self, other: "PlanarFieldSampler") -> "PlanarFieldSampler":
        f, g = self.evaluator, other.evaluator

        def summed(x, y):
            fx, fy = f(x, y)
            gx, gy = g(x, y)
            return fx + gx, fy + gy

        return PlanarFieldSampler(summed, max(self.a, other.a))

    def __neg__(self) -> "PlanarFieldSampler":
        f = self.evaluator

        def negated(x, y):
            fx, fy = f(x, y)
            return -fx, -fy

        return PlanarFieldSampler(negated, self.a)

    def __sub__(self, other: "PlanarFieldSampler") -> "PlanarFieldSampler":
        return self + (-other)


def ab_potential(kappa: float, a: float = 1.0) -> PlanarFieldSampler:
    """The Aharonov-Bohm vector potential ``kappa/|z|^2 * (-y, x)``."""

    def field(x, y):
        r2 = x * x + y * y
        return -kappa * y / r2, kappa * x / r2

    return PlanarFieldSampler(field, a)


def gradient_field(grad: Callable, a: float = 0.0) -> PlanarFieldSampler:
    return PlanarFieldSampler(grad, a)


def circulation_of(field: PlanarFieldSampler, rho: float, n_quad: int = DEFAULT_N_QUAD) -> float:
    """``(1/2pi) * line integral of A.ds`` over the circle ``|z| = rho``.

    Periodic trapezoid rule with ``n_quad`` nodes; spectrally accurate for smooth fields.
    """
    if not rho > field.a:
        raise DomainError(f"circle radius {rho} must exceed the inner radius {field.a}")
    if n_quad < 8:
        raise InvalidArgumentError("n_quad must be at least 8")
    theta = 2.0 * np.pi * np.arange(n_quad) / n_quad
    c, s = np.cos(theta), np.sin(theta)
    ax, ay = field(rho * c, rho * s)
    # ds = rho * (-sin, cos) dtheta
    tangential = rho * (-np.asarray(ax) * s + np.asarray(ay) * c)
    return float(np.mean(tangential))


def is_gqr(kappa1: float, kappa2: float, tol: float = DEFAULT_GQR_TOL) -> bool:
    """Whether ``A_kappa1`` and ``A_kappa2`` are gauge quantum related (integer difference)."""
    if not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    diff = kappa2 - kappa1
    return abs(diff - round(diff)) <= tol


def conjugation_check(kappa: float, m_shift: int, mode: int, mesh: RadialMesh,
                      spec: PotentialSpec) -> float:
    """Max entrywise difference between the radial matrices of ``(kappa, mode)`` and
    ``(kappa + m_shift, mode + m_shift)``.

    Multiplication by ``exp(i*m_shift*theta)`` relabels angular modes, so the two
    operators coincide; the returned value is expected to vanish.
    """
    t1 = assemble_tridiagonal(kappa, mode, spec, mesh)
    t2 = assemble_tridiagonal(kappa + m_shift, mode + m_shift, spec, mesh)
    diff = np.max(np.abs(t1.d - t2.d))
    if t1.e.size:
        diff = max(diff, np.max(np.abs(t1.e - t2.e)))
    return float(diff)


def gqr_report(kappa1: float, kappa2: float, tol: float = DEFAULT_GQR_TOL) -> dict:
    diff = kappa2 - kappa1
    return {
        "gqr": is_gqr(kappa1, kappa2, tol),
        "difference": diff,
        "distance_to_integer": abs(diff - round(diff)),
        "integer_shift": int(round(diff)) if math.isfinite(diff) else None,
    }
