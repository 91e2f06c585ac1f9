"""File formats: flat ``key = value`` configs, sweep CSV, ground-state records."""

from __future__ import annotations

import dataclasses
import math
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError
from .model import NumericsConfig, PotentialSpec

POTENTIAL_KEYS = ("a", "beta", "p", "omega", "q")
NUMERICS_KEYS = ("M", "eig_tol", "deg_tol", "R_growth", "R_tol", "n_default")
INT_KEYS = {"M", "n_default"}
SECTIONS = {"potential": POTENTIAL_KEYS, "numerics": NUMERICS_KEYS}
CSV_HEADER = "kappa,lambda1,mode,deriv_hf,deriv_fd"


def fmt(x: float) -> str:
    """Round-trip float formatting: 17 significant digits."""
    return format(float(x), ".17g")


def _coerce(key: str, raw: str):
    try:
        if key in INT_KEYS:
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        value = float(raw)
    except ValueError:
        raise InvalidArgumentError(f"bad value for {key!r}: {raw!r}") from None
    if not math.isfinite(value):
        raise InvalidArgumentError(f"non-finite value for {key!r}: {raw!r}")
    return value


def parse_config(text: str) -> dict[str, float]:
    """Parse ``key = value`` lines; keys may carry a ``potential.``/``numerics.`` prefix."""
    values: dict[str, float] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if "." in key:
            section, key = key.split(".", 1)
            if section not in SECTIONS or key not in SECTIONS[section]:
                raise InvalidArgumentError(f"line {lineno}: unknown key {section}.{key}")
        elif key not in POTENTIAL_KEYS and key not in NUMERICS_KEYS:
            raise InvalidArgumentError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def load_config(path) -> dict[str, float]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def split_config(values: dict, overrides: dict | None = None) -> tuple[PotentialSpec, NumericsConfig]:
    """Build ``(PotentialSpec, NumericsConfig)`` from parsed values; ``overrides`` win."""
    merged = {**values, **{k: v for k, v in (overrides or {}).items() if v is not None}}
    spec = PotentialSpec(**{k: float(merged[k]) for k in POTENTIAL_KEYS if k in merged})
    cfg = NumericsConfig(**{k: merged[k] for k in NUMERICS_KEYS if k in merged})
    return spec, cfg


def dump_potential(spec: PotentialSpec) -> str:
    return "".join(f"{k} = {fmt(v)}\n" for k, v in spec.as_dict().items())


def load_potential(path) -> PotentialSpec:
    return split_config(load_config(path))[0]


def dump_numerics(cfg: NumericsConfig) -> str:
    return "".join(f"numerics.{k} = {v if k in INT_KEYS else fmt(v)}\n"
                   for k, v in dataclasses.asdict(cfg).items())


def _cell(x) -> str:
    return "" if x is None else fmt(x)


def sweep_to_csv(result) -> str:
    lines = [CSV_HEADER]
    for k, lam, m, hf, fd in zip(result.kappas, result.lambdas, result.modes,
                                 result.hf_derivs, result.fd_derivs):
        lines.append(f"{fmt(k)},{fmt(lam)},{int(m)},{_cell(hf)},{_cell(fd)}")
    return "\n".join(lines) + "\n"


def sweep_from_csv(text: str):
    from .spectrum import SweepResult

    rows = text.strip("\n").split("\n")
    if rows[0] != CSV_HEADER:
        raise InvalidArgumentError(f"unexpected CSV header {rows[0]!r}")
    cols: list[list] = [[], [], [], [], []]
    for row in rows[1:]:
        k, lam, m, hf, fd = row.split(",")
        cols[0].append(float(k))
        cols[1].append(float(lam))
        cols[2].append(int(m))
        cols[3].append(float(hf) if hf else None)
        cols[4].append(float(fd) if fd else None)
    return SweepResult(*cols)


def ground_state_record(gs, multiplicity: int | None = None, hf: float | None = None) -> str:
    """Header ``key: value`` lines, a blank line, then ``r<TAB>psi`` rows."""
    header = {
        "kappa": fmt(gs.kappa),
        "kappa_canonical": fmt(gs.kappa_canonical),
        "lambda1": fmt(gs.lambda1),
        "mode_star": str(gs.mode_star),
    }
    if multiplicity is not None:
        header["multiplicity"] = str(multiplicity)
    header["deriv_hf"] = "undefined" if hf is None else fmt(hf)
    header.update({k: fmt(v) for k, v in gs.spec.as_dict().items()})
    header.update({"R": fmt(gs.mesh.R), "n": str(gs.mesh.n), "h": fmt(gs.mesh.h),
                   "normalization": "int psi^2 r dr = 1"})
    lines = [f"{k}: {v}" for k, v in header.items()]
    lines.append("")
    lines.extend(f"{fmt(r)}\t{fmt(f)}" for r, f in zip(gs.mesh.nodes, gs.psi))
    return "\n".join(lines) + "\n"


def parse_ground_state_record(text: str) -> tuple[dict[str, str], np.ndarray]:
    head, _, body = text.partition("\n\n")
    header = dict(line.split(": ", 1) for line in head.splitlines())
    table = np.array([[float(x) for x in row.split("\t")] for row in body.splitlines() if row])
    return header, table


def matrix_to_csv(T) -> str:
    """Two columns ``d,e``; the last row has an empty ``e``."""
    lines = ["d,e"]
    for i, d in enumerate(T.d):
        e = fmt(T.e[i]) if i < T.e.size else ""
        lines.append(f"{fmt(d)},{e}")
    return "\n".join(lines) + "\n"


def write_text(path, text: str):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise InvalidArgumentError(f"cannot write {path}: {exc}") from None
