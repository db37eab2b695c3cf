"""Command-line front end.

Exit codes: 0 success, 1 an asserted inequality or identity failed,
2 bad arguments or an invalid complex.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import catalog
from .cheeger import (
    CHEEGER_N_CAP,
    cheeger_tripartite,
    cheeger_tripartite_sampled,
    cheeger_upper,
    lower_bound_cheeger_link,
    lower_bound_link,
    upper_bound_edge_L1,
    upper_bound_L2,
    zero_gap_certificate,
)
from .cochains import LAPLACIANS
from .complex import Triangulation, TriangulationError
from .io import complex_to_dict, dump_operators, generate, load_complex, parse_faces
from .spectral import eigen, harmonic_dims, hodge, spectral_gap
from .suite import format_table, paper_suite, rows_as_dicts

THREADS_ENV = "SIMPLEX_SPECTRA_THREADS"

BOUND_KINDS = {
    "edge-L1": lambda t, cfg: upper_bound_edge_L1(t),
    "L2": lambda t, cfg: upper_bound_L2(t),
    "cheeger-upper": lambda t, cfg: cheeger_upper(t, cfg.cheeger_cap, cfg.threads),
    "link-lower": lambda t, cfg: lower_bound_link(t, strict=cfg.strict),
    "cheeger-link-lower": lambda t, cfg: lower_bound_cheeger_link(t, cfg.degree, strict=cfg.strict),
    "zero-gap": lambda t, cfg: zero_gap_certificate(t),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    fmt: str = "json"
    zero_tol: float | None = None
    match_tol: float = 1e-8
    cheeger_cap: int = CHEEGER_N_CAP
    threads: int = 1
    seed: int = 0
    dump_ops: str | None = None
    strict: bool = False
    degree: str = "link"

    def validate(self) -> None:
        if self.zero_tol is not None and self.zero_tol <= 0:
            raise UsageError("--zero-tol must be positive")
        if self.match_tol <= 0:
            raise UsageError("--match-tol must be positive")
        if self.cheeger_cap < 3:
            raise UsageError("--cheeger-cap must be at least 3")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")


def _common(parser: argparse.ArgumentParser, needs_input: bool = True) -> None:
    if needs_input:
        parser.add_argument(
            "--input", "-i", required=True,
            help="complex JSON file, '-' for stdin, 'complete:N', or 'example:NAME'",
        )
    parser.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="json")
    parser.add_argument("--zero-tol", type=float, default=None)
    parser.add_argument("--match-tol", type=float, default=1e-8)
    parser.add_argument("--cheeger-cap", type=int, default=CHEEGER_N_CAP)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--dump-ops", metavar="DIR", default=None, help="write operator matrices to DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simplex-spectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="emit a complex as JSON")
    gen.add_argument("kind", choices=("complete", "from-faces"))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--faces", help='faces as "a,b,c;a,b,c"')
    gen.add_argument("--indexing", choices=("zero", "one"), default="zero")
    gen.add_argument("--output", "-o", default=None)

    spectra = sub.add_parser("spectra", help="eigenvalues of the Laplacians")
    spectra.add_argument("--operator", choices=LAPLACIANS + ("all",), default="all")
    _common(spectra)

    _common(sub.add_parser("gap", help="spectral gap of the upper Laplacian on 1-forms"))
    _common(sub.add_parser("hodge", help="Hodge decomposition dimensions"))

    cheeger = sub.add_parser("cheeger", help="tripartite Cheeger constant")
    cheeger.add_argument("--sample", type=int, default=None, metavar="N", help="sample N labelings instead of enumerating")
    _common(cheeger)

    bounds = sub.add_parser("bounds", help="spectral-gap bound certificates")
    bounds.add_argument("--kind", choices=tuple(BOUND_KINDS) + ("all",), default="all")
    bounds.add_argument("--strict", action="store_true", help="reject inputs violating a bound's hypotheses")
    bounds.add_argument("--degree", choices=("link", "ambient"), default="link")
    _common(bounds)

    suite = sub.add_parser("paper-suite", help="reproduce the built-in worked examples")
    suite.add_argument("--json", action="store_true")
    suite.add_argument(
        "--override", action="append", default=[], metavar="NAME=FACES",
        help='replace an example\'s 1-indexed face list, e.g. T4="1,2,3;1,2,4"',
    )
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("input", "fmt", "zero_tol", "match_tol", "cheeger_cap", "threads", "seed", "dump_ops", "strict", "degree"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            cfg.threads = int(env)
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    cfg.validate()
    return cfg


def _load(spec: str) -> Triangulation:
    if spec.startswith("complete:"):
        return generate("complete", int(spec.split(":", 1)[1]))
    if spec.startswith("example:"):
        return catalog.example(spec.split(":", 1)[1])
    return load_complex(spec)


def _clean(obj):
    """Recursively convert numpy scalars and arrays for JSON output."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _emit(payload, fmt: str, out, csv_rows=None) -> None:
    if fmt == "json":
        out.write(json.dumps(_clean(payload), indent=2) + "\n")
    elif fmt == "csv":
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in csv_rows if csv_rows is not None else _flatten(payload):
            writer.writerow(_clean(row))
        out.write(buf.getvalue())
    else:
        for key, value in _flatten(payload):
            out.write(f"{key}: {value}\n")


def _flatten(payload, prefix=""):
    rows = []
    if isinstance(payload, dict):
        for k, v in payload.items():
            rows.extend(_flatten(v, f"{prefix}{k}." if not isinstance(v, (int, float, str, bool, type(None))) else f"{prefix}{k}"))
        return rows
    if isinstance(payload, list) and payload and isinstance(payload[0], (dict, list)):
        for i, v in enumerate(payload):
            rows.extend(_flatten(v, f"{prefix}{i}."))
        return rows
    return [[prefix.rstrip("."), _clean(payload)]]


def _gap_dict(t: Triangulation, cfg: RunConfig) -> dict | None:
    try:
        g = spectral_gap(t, cfg.zero_tol)
    except TriangulationError:
        return None
    return {"value": g.value, "index": g.index}


def cmd_spectra(t, cfg, args, out) -> int:
    which = LAPLACIANS if args.operator == "all" else (args.operator,)
    gap = _gap_dict(t, cfg)
    reports = []
    csv_rows = [["operator", "index", "eigenvalue"]]
    for name in which:
        rep = eigen(t, name, cfg.zero_tol, cfg.match_tol)
        reports.append({
            "operator": name,
            "eigenvalues": rep.eigenvalues,
            "zero_tol": rep.zero_tol,
            "multiplicities": [[v, c] for v, c in rep.multiplicities],
            "gap": gap,
        })
        csv_rows.extend([name, i, v] for i, v in enumerate(rep.eigenvalues))
    _emit(reports[0] if len(reports) == 1 else reports, cfg.fmt, out, csv_rows)
    return 0


def cmd_gap(t, cfg, args, out) -> int:
    g = spectral_gap(t, cfg.zero_tol)
    payload = {"gap": g.value, "index": g.index, "constrained_min": g.constrained_min, "zero_tol": g.zero_tol}
    _emit(payload, cfg.fmt, out)
    return 0


def cmd_hodge(t, cfg, args, out) -> int:
    h = hodge(t)
    dims = harmonic_dims(t, cfg.zero_tol)
    residual = h.gram_residual()
    payload = {
        "edges": len(t.edges),
        "exact_dim": h.exact_dim,
        "coexact_dim": h.coexact_dim,
        "harmonic_dim": h.harmonic_dim,
        "harmonic_dim_checks": dims,
        "gram_residual": residual,
    }
    _emit(payload, cfg.fmt, out)
    consistent = len(set(dims.values()) | {h.harmonic_dim}) == 1 and residual < 1e-10
    return 0 if consistent else 1


def cmd_cheeger(t, cfg, args, out) -> int:
    if args.sample:
        res = cheeger_tripartite_sampled(t, args.sample, cfg.seed, cfg.threads)
    else:
        res = cheeger_tripartite(t, cfg.cheeger_cap, cfg.threads)
    gap = _gap_dict(t, cfg)
    payload = {
        "h": res.h,
        "h_exact": str(res.exact_h),
        "exact": res.exact,
        "partitions_evaluated": res.evaluated,
        "argmin": {
            "parts": [list(p) for p in res.argmin.parts],
            "face_count": res.argmin.face_count,
            "ratio": res.argmin.ratio,
        },
        "gap": gap,
    }
    _emit(payload, cfg.fmt, out)
    if res.exact and gap is not None and res.h > 0 and gap["value"] > res.h + 1e-9:
        return 1
    return 0


def cmd_bounds(t, cfg, args, out) -> int:
    kinds = list(BOUND_KINDS) if args.kind == "all" else [args.kind]
    certs, skipped = [], {}
    for kind in kinds:
        try:
            certs.append(BOUND_KINDS[kind](t, cfg))
        except TriangulationError as exc:
            if args.kind != "all":
                raise
            skipped[kind] = str(exc)
    if len(certs) == 1 and not skipped:
        payload = certs[0].to_dict()
    else:
        payload = {"certificates": [c.to_dict() for c in certs], "skipped": skipped}
    csv_rows = [["kind", "value", "relation", "reference", "holds", "applicable"]]
    csv_rows.extend([c.kind, c.value, c.relation, c.reference, c.holds, c.applicable] for c in certs)
    _emit(payload, cfg.fmt, out, csv_rows)
    return 1 if any(c.violated for c in certs) else 0


COMMANDS = {
    "spectra": cmd_spectra,
    "gap": cmd_gap,
    "hodge": cmd_hodge,
    "cheeger": cmd_cheeger,
    "bounds": cmd_bounds,
}


def _parse_overrides(items: list[str]) -> dict:
    overrides = {}
    for item in items:
        name, sep, faces = item.partition("=")
        if not sep:
            raise UsageError(f"--override expects NAME=FACES, got {item!r}")
        overrides[name.strip()] = parse_faces(faces)
    return overrides


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            t = generate(args.kind, args.n, args.faces, args.indexing)
            text = json.dumps(complex_to_dict(t, args.indexing)) + "\n"
            if args.output:
                with open(args.output, "w") as fh:
                    fh.write(text)
            else:
                out.write(text)
            return 0
        if args.command == "paper-suite":
            rows = paper_suite(_parse_overrides(args.override))
            if args.json:
                out.write(json.dumps(_clean(rows_as_dicts(rows)), indent=2) + "\n")
            else:
                out.write(format_table(rows) + "\n")
            return 0 if all(r.passed for r in rows) else 1
        cfg = _config(args)
        t = _load(cfg.input)
        if cfg.dump_ops:
            dump_operators(t, cfg.dump_ops)
        return COMMANDS[args.command](t, cfg, args, out)
    except (TriangulationError, UsageError, KeyError, OSError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"simplex-spectra {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
