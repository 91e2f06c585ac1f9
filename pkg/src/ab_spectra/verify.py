"""Desk-scale check suite behind ``ab-spectra verify``.

Each check returns a :class:`CheckResult` carrying the measured quantity, so
the CLI can print one line per check whether it passes or not.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .eigensolve import dense_brute_force, lowest_k
from .errors import ABSpectraError
from .gauge import conjugation_check, is_gqr
from .model import NumericsConfig, PotentialSpec, build_mesh, validate_potential
from .oracle2d import compare_with_radial
from .radial import TridiagonalOperator
from .spectrum import (adaptive_outer_radius, convergence_study, degeneracy_multiplicity,
                       fd_derivative, ground_state, hf_derivative, nodal_ray_check)

KAPPA_SET = (-0.4, -0.1, 0.2, 0.5)
HF_KAPPAS = (0.1, 0.25, 0.4)
ORDER_BAND = (1.7, 2.3)
DISCRETIZATION_TOL = 1e-6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<22} {self.detail}  [{self.seconds:.1f}s]"


def _rel(x, y) -> float:
    return abs(x - y) / abs(y)


def check_periodicity(spec, cfg, mesh):
    worst = max(_rel(ground_state(k + 1, spec, cfg, mesh).lambda1,
                     ground_state(k, spec, cfg, mesh).lambda1) for k in KAPPA_SET)
    return worst <= 1e-12, f"max |l(k+1)-l(k)|/l = {worst:.2e} (tol 1e-12)"


def check_evenness(spec, cfg, mesh):
    worst = max(_rel(ground_state(-k, spec, cfg, mesh).lambda1,
                     ground_state(k, spec, cfg, mesh).lambda1) for k in KAPPA_SET)
    return worst <= 1e-12, f"max |l(-k)-l(k)|/l = {worst:.2e} (tol 1e-12)"


def check_monotonicity(spec, cfg, mesh):
    grid = np.linspace(0.0, 0.5, 26)
    lams = np.array([ground_state(k, spec, cfg, mesh).lambda1 for k in grid])
    steps = np.diff(lams)
    floor = 10 * cfg.eig_tol * lams[1:]
    ok = bool(np.all(steps > 0) and np.all(steps >= floor))
    return ok, f"min step {steps.min():.3e} vs floor {floor.max():.1e}"


def check_hellmann_feynman(spec, cfg, mesh):
    worst = 0.0
    for k in HF_KAPPAS:
        hf = hf_derivative(ground_state(k, spec, cfg, mesh), cfg.deg_tol)
        fd = fd_derivative(k, 1e-4, spec, cfg, mesh)
        worst = max(worst, _rel(hf, fd))
    return worst <= 1e-4, f"max |hf-fd|/|fd| = {worst:.2e} (tol 1e-4)"


def check_degeneracy(spec, cfg, mesh):
    simple = [degeneracy_multiplicity(k, spec, cfg, mesh) for k in (0.0, 0.1, 0.25, 0.49)]
    mult, modes = degeneracy_multiplicity(0.5, spec, cfg, mesh)
    gs = ground_state(0.5, spec, cfg, mesh)
    split = _rel(gs.mode_energies[1], gs.mode_energies[0])
    ok = all(m == 1 for m, _ in simple) and mult == 2 and modes == [0, 1] and split <= 1e-12
    return ok, (f"simple: {[m for m, _ in simple]}; k=1/2: {mult} modes {modes}, "
                f"split {split:.1e}")


def check_minimum(spec, cfg, mesh):
    left = fd_derivative(-0.1, 1e-4, spec, cfg, mesh)
    right = fd_derivative(0.1, 1e-4, spec, cfg, mesh)
    return left < 0 < right, f"dl/dk(-0.1) = {left:.4e}, dl/dk(+0.1) = {right:.4e}"


def check_nodal_ray(spec, cfg, mesh):
    rep = nodal_ray_check(spec, cfg, mesh)
    theta = np.linspace(0.0, 2 * np.pi, 33)
    psi = np.multiply.outer(rep.f, (1.0 + np.exp(1j * theta)) / 2.0)
    ident = float(np.max(np.abs(np.abs(psi) - np.multiply.outer(np.abs(rep.f),
                                                                np.abs(np.cos(theta / 2))))))
    ok = rep.max_on_ray == 0.0 and rep.min_off_ray > 0 and ident <= 1e-14
    return ok, (f"max on ray {rep.max_on_ray:.1e}, min off ray {rep.min_off_ray:.3e}, "
                f"|cos| identity {ident:.1e}")


def check_gauge(spec, cfg, mesh):
    ks = [-1.5, -0.7, -0.5, -0.2, 0.0, 0.3, 0.5, 0.8, 1.3, 2.5]
    wrong = 0
    for k1, k2 in itertools.product(ks, ks):
        diff = k2 - k1
        if is_gqr(k1, k2, 1e-9) != (abs(diff - round(diff)) <= 1e-9):
            wrong += 1
    resid = max(conjugation_check(k, s, m, mesh, spec)
                for k in (-0.4, -0.2, 0.1, 0.3, 1.7)
                for s in (-2, -1, 0, 1, 5)
                for m in (-3, -1, 0, 2, 3))
    # exact on fine meshes; coarse meshes may differ by one ulp of the stencil diagonal
    ulp = np.spacing(2.0 / mesh.h**2 + float(np.max(spec(mesh.nodes))))
    return (wrong == 0 and resid <= ulp,
            f"GQR mismatches {wrong}/100, conjugation residual {resid:.1e} (ulp {ulp:.1e})")


def check_eigensolver(spec, cfg, mesh):
    rng = np.random.default_rng(20240917)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 51))
        T = TridiagonalOperator.from_arrays(rng.normal(size=n), rng.normal(size=n - 1))
        got = np.array(lowest_k(T, n, 1e-14))
        ref = np.array(dense_brute_force(T))
        worst = max(worst, float(np.max(np.abs(got - ref))) / T.norm_inf())
    return worst <= 1e-10, f"max scaled |bisection - dense| = {worst:.2e} (tol 1e-10)"


def check_oracle(spec, cfg, mesh):
    rep = compare_with_radial(0.0, spec, cfg, 100, 16, refine=False, R=mesh.R)
    return rep.discrepancy <= 1e-8, f"2D vs radial at k=0: {rep.discrepancy:.2e} (tol 1e-8)"


def check_convergence(spec, cfg, mesh):
    base = max(cfg.n_default // 4, 1)
    n_list = (base, 2 * base, 4 * base)
    details, ok = [], True
    for k in (0.0, 0.3):
        study = convergence_study(k, spec, cfg, n_list, R=mesh.R)
        inside = ORDER_BAND[0] <= study.order <= ORDER_BAND[1]
        ok &= inside
        details.append(f"k={k}: {study.order:.3f}")
    return ok, f"order {', '.join(details)} on n={n_list} (band {ORDER_BAND})"


def check_discretization(spec, cfg, mesh):
    base = max(cfg.n_default // 4, 1)
    study = convergence_study(0.0, spec, cfg, (base, 2 * base, 4 * base), R=mesh.R)
    err = abs(study.lambdas[-1] - study.extrapolated) / abs(study.extrapolated)
    return err <= DISCRETIZATION_TOL, (f"estimated relative error at n={4 * base}: {err:.2e} "
                                       f"(tol {DISCRETIZATION_TOL:.0e})")


CHECKS = (
    ("gauge criterion", check_gauge),
    ("periodicity", check_periodicity),
    ("evenness", check_evenness),
    ("monotonicity", check_monotonicity),
    ("hellmann-feynman", check_hellmann_feynman),
    ("degeneracy", check_degeneracy),
    ("minimum at integers", check_minimum),
    ("nodal ray", check_nodal_ray),
    ("eigensolver oracle", check_eigensolver),
    ("2d oracle", check_oracle),
    ("convergence order", check_convergence),
    ("discretization error", check_discretization),
)


def run_checks(spec: PotentialSpec, cfg: NumericsConfig, report=None) -> list[CheckResult]:
    """Run every check; ``report`` (if given) is called with each result as it completes."""
    results = []

    def emit(res):
        results.append(res)
        if report is not None:
            report(res)

    validation = validate_potential(spec)
    emit(CheckResult("potential", validation.ok, str(validation)))
    if not validation.ok:
        return results

    R = max(adaptive_outer_radius(k, spec, cfg) for k in (0.0, 0.5))
    mesh = build_mesh(spec.a, R, cfg.n_default)
    for name, check in CHECKS:
        start = time.perf_counter()
        try:
            passed, detail = check(spec, cfg, mesh)
        except ABSpectraError as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        emit(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
    return results
