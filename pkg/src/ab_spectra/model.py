"""Domain types: circulation arithmetic, the confining potential family and radial meshes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidArgumentError


def split_circulation(kappa: float) -> tuple[int, float]:
    """Return ``(shift, kc)`` with ``kappa = shift + kc`` and ``kc`` in (-1/2, 1/2]."""
    if not math.isfinite(kappa):
        raise InvalidArgumentError(f"circulation must be finite, got {kappa!r}")
    shift = math.ceil(kappa - 0.5)
    kc = kappa - shift
    # rounding in kappa - 0.5 can push kc onto the excluded endpoint
    if kc <= -0.5:
        shift -= 1
        kc = kappa - shift
    elif kc > 0.5:
        shift += 1
        kc = kappa - shift
    return int(shift), kc + 0.0


def canonical_circulation(kappa: float) -> float:
    """Representative of ``kappa`` modulo 1 in the half-open interval (-1/2, 1/2]."""
    return split_circulation(kappa)[1]


@dataclass(frozen=True)
class Circulation:
    kappa: float

    def __post_init__(self):
        if not math.isfinite(self.kappa):
            raise InvalidArgumentError(f"circulation must be finite, got {self.kappa!r}")

    @property
    def canonical(self) -> float:
        return canonical_circulation(self.kappa)

    @property
    def shift(self) -> int:
        return split_circulation(self.kappa)[0]


@dataclass(frozen=True)
class PotentialSpec:
    """Confining potential ``V(r) = beta/(r-a)**p + omega*(r-a)**q`` on ``r > a``.

    The first term is the border barrier, the second the confinement at infinity.
    """

    a: float = 1.0
    beta: float = 1.0
    p: float = 2.0
    omega: float = 1.0
    q: float = 2.0

    def __call__(self, r):
        return evaluate_potential(self, r)

    def as_dict(self) -> dict[str, float]:
        return {"a": self.a, "beta": self.beta, "p": self.p, "omega": self.omega, "q": self.q}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else "violated: " + ", ".join(self.violations)


def border_bound_minimum(spec: PotentialSpec) -> float:
    """Infimum of ``V(r)*(r-a)**2`` over ``r`` in (a, a+1]."""
    beta, p, omega, q = spec.beta, spec.p, spec.omega, spec.q
    # phi(x) = beta*x**(2-p) + omega*x**(q+2), x = r - a
    if p < 2:
        return 0.0
    if p == 2:
        return beta
    x_star = (beta * (p - 2) / (omega * (q + 2))) ** (1.0 / (p + q))
    x = min(x_star, 1.0)
    return beta * x ** (2 - p) + omega * x ** (q + 2)


def validate_potential(spec: PotentialSpec) -> ValidationReport:
    """Check the border bound, divergence at infinity and positivity of ``spec``."""
    values = spec.as_dict()
    bad = [k for k, v in values.items() if not math.isfinite(v)]
    if bad:
        return ValidationReport(tuple(f"non-finite parameter {k}" for k in bad))

    violations = []
    if spec.a <= 0:
        violations.append("radius")
    if spec.beta <= 0 or spec.omega < 0:
        violations.append("positivity")
    if spec.omega <= 0 or spec.q < 1:
        violations.append("divergence")
    if spec.p < 2 or spec.beta <= 0 or border_bound_minimum(spec) < 1.0:
        violations.append("border bound")
    return ValidationReport(tuple(violations))


def evaluate_potential(spec: PotentialSpec, r):
    """Evaluate the confining potential at radius ``r`` (scalar or array), ``r > a``."""
    x = np.asarray(r, dtype=float) - spec.a
    if np.any(~(x > 0)):
        raise DomainError(f"potential is defined only for r > a = {spec.a}")
    v = spec.beta / x**spec.p + spec.omega * x**spec.q
    return float(v) if v.ndim == 0 else v


def potential_minimizer(spec: PotentialSpec) -> float:
    """Offset ``r* - a`` of the unique minimizer of ``V``."""
    return (spec.beta * spec.p / (spec.omega * spec.q)) ** (1.0 / (spec.p + spec.q))


@dataclass(frozen=True)
class RadialMesh:
    """Uniform interior nodes ``r_i = a + i*h``, ``i = 1..n``, ``h = (R-a)/(n+1)``."""

    a: float
    R: float
    n: int
    h: float = field(init=False)
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        h = (self.R - self.a) / (self.n + 1)
        nodes = self.a + h * np.arange(1, self.n + 1)
        nodes.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "nodes", nodes)


def build_mesh(a: float, R: float, n: int) -> RadialMesh:
    if not (math.isfinite(a) and math.isfinite(R)) or R <= a:
        raise InvalidArgumentError(f"outer radius R={R} must exceed a={a}")
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"mesh needs n >= 1 interior nodes, got {n}")
    return RadialMesh(float(a), float(R), int(n))


@dataclass(frozen=True)
class NumericsConfig:
    M: int = 3
    eig_tol: float = 1e-10
    deg_tol: float = 1e-8
    R_growth: float = 2.0
    R_tol: float = 1e-8
    n_default: int = 4000

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise InvalidArgumentError("M must be an integer >= 1")
        for name in ("eig_tol", "deg_tol", "R_tol"):
            if not getattr(self, name) > 0:
                raise InvalidArgumentError(f"{name} must be positive")
        if not self.R_growth > 1:
            raise InvalidArgumentError("R_growth must exceed 1")
        if int(self.n_default) != self.n_default or self.n_default < 1:
            raise InvalidArgumentError("n_default must be a positive integer")
