"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 invalid input or config,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import io
from .errors import (ConvergenceError, DomainError, InconsistencyError, InvalidArgumentError,
                     UndefinedDerivativeError)
from .gauge import conjugation_check, is_gqr
from .model import build_mesh, canonical_circulation, split_circulation, validate_potential
from .oracle2d import compare_with_radial
from .radial import assemble_tridiagonal
from .spectrum import (convergence_study, degeneracy_multiplicity, ground_state,
                       hf_derivative, sweep)
from .verify import ORDER_BAND, run_checks

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return value


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat 'key = value' config file")
    g = common.add_argument_group("overrides (take precedence over --config)")
    for key in io.POTENTIAL_KEYS:
        g.add_argument(f"--{key}", type=finite_float, default=None)
    g.add_argument("--M", type=int, default=None, help="angular mode window")
    g.add_argument("--n-default", dest="n_default", type=int, default=None,
                   help="radial interior nodes")
    g.add_argument("--eig-tol", dest="eig_tol", type=finite_float, default=None)
    g.add_argument("--deg-tol", dest="deg_tol", type=finite_float, default=None)
    g.add_argument("--R-growth", dest="R_growth", type=finite_float, default=None)
    g.add_argument("--R-tol", dest="R_tol", type=finite_float, default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="ab-spectra",
        description="Ground eigenvalue of the Aharonov-Bohm Hamiltonian with a confining "
                    "potential outside a disk solenoid.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="ground state at one circulation")
    p.add_argument("--kappa", type=finite_float, required=True)
    p.add_argument("--out", help="write the ground-state record here")
    p.add_argument("--dump-matrix", dest="dump_matrix",
                   help="write the minimizing mode's matrix as CSV (columns d, e)")

    p = sub.add_parser("sweep", parents=[common], help="ground eigenvalue over a circulation grid")
    p.add_argument("--from", dest="kappa_from", type=finite_float, required=True)
    p.add_argument("--to", dest="kappa_to", type=finite_float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--fd-h", dest="fd_h", type=finite_float, default=1e-4)
    p.add_argument("--out", help="CSV output path (stdout if omitted)")

    sub.add_parser("verify", parents=[common], help="run the theorem check suite")

    p = sub.add_parser("gauge", parents=[common], help="gauge relation between two circulations")
    p.add_argument("--k1", type=finite_float, required=True)
    p.add_argument("--k2", type=finite_float, required=True)
    p.add_argument("--tol", type=finite_float, default=1e-9)

    p = sub.add_parser("oracle", parents=[common], help="compare with the planar discretization")
    p.add_argument("--kappa", type=finite_float, required=True)
    p.add_argument("--nr", type=int, required=True)
    p.add_argument("--ntheta", type=int, required=True)
    p.add_argument("--refine", action="store_true", help="repeat at doubled n_theta")

    p = sub.add_parser("convergence", parents=[common], help="observed discretization order")
    p.add_argument("--kappa", type=finite_float, required=True)
    p.add_argument("--n-list", dest="n_list", type=int, nargs="+", default=[1000, 2000, 4000])
    return parser


def _load(args, require_valid=True):
    values = io.load_config(args.config) if args.config else {}
    overrides = {k: getattr(args, k, None) for k in io.POTENTIAL_KEYS + io.NUMERICS_KEYS}
    spec, cfg = io.split_config(values, overrides)
    if require_valid:
        report = validate_potential(spec)
        if not report.ok:
            raise InvalidArgumentError(f"invalid potential: {report}")
    return spec, cfg


def cmd_spectrum(args) -> int:
    spec, cfg = _load(args)
    gs = ground_state(args.kappa, spec, cfg)
    mult, modes = degeneracy_multiplicity(args.kappa, spec, cfg, gs.mesh)
    try:
        hf = hf_derivative(gs, cfg.deg_tol)
        hf_text = io.fmt(hf)
    except UndefinedDerivativeError:
        hf = None
        kc = canonical_circulation(args.kappa)
        hf_text = "undefined (endpoint)" if abs(kc) <= cfg.deg_tol else "undefined (degenerate)"
    print(f"kappa: {io.fmt(args.kappa)}")
    print(f"kappa_canonical: {io.fmt(gs.kappa_canonical)}")
    print(f"lambda1: {io.fmt(gs.lambda1)}")
    print(f"mode_star: {gs.mode_star}")
    print(f"multiplicity: {mult} (modes {', '.join(map(str, modes))})")
    print(f"deriv_hf: {hf_text}")
    print(f"mesh: R={io.fmt(gs.mesh.R)} n={gs.mesh.n}")
    if args.out:
        io.write_text(args.out, io.ground_state_record(gs, mult, hf))
    if args.dump_matrix:
        shift, kc = split_circulation(args.kappa)
        T = assemble_tridiagonal(kc, gs.mode_star - shift, spec, gs.mesh)
        io.write_text(args.dump_matrix, io.matrix_to_csv(T))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    spec, cfg = _load(args)
    result = sweep(args.kappa_from, args.kappa_to, args.steps, spec, cfg, fd_h=args.fd_h)
    text = io.sweep_to_csv(result)
    if args.out:
        io.write_text(args.out, text)
        print(f"wrote {len(result)} rows to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    spec, cfg = _load(args, require_valid=False)
    results = run_checks(spec, cfg, report=lambda res: print(res.line(), flush=True))
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return EXIT_VERIFY
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def cmd_gauge(args) -> int:
    spec, cfg = _load(args)
    verdict = is_gqr(args.k1, args.k2, args.tol)
    shift = round(args.k2 - args.k1)
    mesh = build_mesh(spec.a, spec.a + 10.0, cfg.n_default)
    resid = conjugation_check(args.k1, shift, 0, mesh, spec)
    print(f"GQR: {'yes' if verdict else 'no'}")
    print(f"canonical: k1 -> {io.fmt(canonical_circulation(args.k1))}, "
          f"k2 -> {io.fmt(canonical_circulation(args.k2))}")
    print(f"difference: {io.fmt(args.k2 - args.k1)} (nearest integer {shift})")
    print(f"conjugation residual (shift {shift}): {resid:.17g}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec, cfg = _load(args)
    rep = compare_with_radial(args.kappa, spec, cfg, args.nr, args.ntheta, refine=args.refine)
    print(f"lambda1_2d: {io.fmt(rep.lambda_2d)}")
    print(f"lambda1_radial: {io.fmt(rep.lambda_radial)}")
    print(f"discrepancy: {rep.discrepancy:.6e}")
    if args.refine:
        print(f"lambda1_2d (ntheta={2 * args.ntheta}): {io.fmt(rep.lambda_2d_refined)}")
        print(f"discrepancy (ntheta={2 * args.ntheta}): {rep.discrepancy_refined:.6e}")
    return EXIT_OK


def cmd_convergence(args) -> int:
    spec, cfg = _load(args)
    study = convergence_study(args.kappa, spec, cfg, args.n_list)
    for n, lam in zip(study.n_list, study.lambdas):
        print(f"n={n}: lambda1 = {io.fmt(lam)}")
    inside = ORDER_BAND[0] <= study.order <= ORDER_BAND[1]
    print(f"order: {study.order:.6f} ({'within' if inside else 'outside'} {list(ORDER_BAND)})")
    print(f"richardson: {io.fmt(study.extrapolated)}")
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "gauge": cmd_gauge,
    "oracle": cmd_oracle,
    "convergence": cmd_convergence,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidArgumentError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistencyError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ConvergenceError, DomainError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
