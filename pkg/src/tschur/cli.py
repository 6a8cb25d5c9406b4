"""Command-line entry point: expand, verify, oracle and scan."""

from __future__ import annotations

import argparse
import fnmatch
import json
import sys
from pathlib import Path

from . import congruences
from .expr import ExpressionError, evaluate, parse_expression
from .families import (
    OVERPARTITION,
    TSCHUR,
    TSCHUR_OVER,
    TSCHUR_OVER_TUPLE,
    FamilySpec,
    enumerate_overpartitions,
    family_gf,
    oracle_t_schur,
    oracle_t_schur_over,
    oracle_t_schur_over_direct,
    oracle_t_schur_regular,
    oracle_t_schur_residues,
    parse_family,
)
from .manifest import ManifestError, default_order, register_manifest, shipped_manifest_text
from .report import to_json
from .runner import run_claims
from .series import EXACT, Modular, NonUnitError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _ring(text: str):
    text = text.strip()
    if text in ("exact", "ZZ"):
        return EXACT
    parts = text.split()
    if len(parts) == 2 and parts[0] == "mod" and parts[1].isdigit():
        return Modular(int(parts[1]))
    if text.isdigit():
        return Modular(int(text))
    raise argparse.ArgumentTypeError(f"ring must be 'exact' or 'mod N', got {text!r}")


def _binding(text: str) -> tuple[str, int]:
    name, sep, value = text.partition("=")
    try:
        return name.strip(), int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected name=int, got {text!r}") from None


def _emit_rows(header: list[str], rows: list[list], fmt: str, out, meta: dict | None = None):
    if fmt == "json":
        doc = dict(meta or {})
        doc["rows"] = [dict(zip(header, r)) for r in rows]
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    for key, value in (meta or {}).items():
        out.write(f"# {key}: {value}\n")
    out.write("\t".join(header) + "\n")
    for r in rows:
        out.write("\t".join(str(v).lower() if isinstance(v, bool) else str(v) for v in r) + "\n")


# -- expand -------------------------------------------------------------------


def cmd_expand(args, out) -> int:
    order = args.order or default_order()
    try:
        s = evaluate(parse_expression(args.expression), order, args.ring, dict(args.let))
    except (ExpressionError, NonUnitError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    rows = [[n, int(c)] for n, c in enumerate(s.coeffs())]
    meta = {"expression": args.expression, "ring": str(args.ring), "order": s.order}
    _emit_rows(["n", "coefficient"], rows, args.format, out, meta)
    return EXIT_OK


# -- verify -------------------------------------------------------------------


def _load(sources: list[str]):
    if not sources:
        return register_manifest(shipped_manifest_text())
    claims = []
    for src in sources:
        if src.startswith("shipped:"):
            claims += register_manifest(shipped_manifest_text(src.split(":", 1)[1]))
        else:
            claims += register_manifest(Path(src))
    seen = set()
    for c in claims:
        if c.id in seen:
            raise ManifestError(f"duplicate claim id {c.id!r} across manifests", c.line, 1)
        seen.add(c.id)
    return claims


def _select(claims, filters: list[str]):
    """Keep claims matching every ``key=pattern`` filter (shell-style patterns)."""
    for flt in filters:
        key, sep, pattern = flt.partition("=")
        if not sep or key not in ("id", "kind"):
            raise UsageError(f"filter must be id=PATTERN or kind=PATTERN, got {flt!r}")
        claims = [c for c in claims if fnmatch.fnmatchcase(getattr(c, key), pattern)]
    return claims


def cmd_verify(args, out) -> int:
    try:
        claims = _select(_load(args.manifest), args.filter)
    except (ManifestError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    if not claims:
        raise UsageError("no claims selected")
    reports = run_claims(claims, order=args.order, jobs=args.jobs)
    doc = to_json(reports) + "\n"
    if args.report:
        Path(args.report).write_text(doc, encoding="utf-8")
    if args.format == "json":
        out.write(doc)
    else:
        for r in reports:
            detail = json.dumps(r.detail, sort_keys=True) if r.detail else ""
            out.write(f"{r.claim_id}\t{r.status}\t{r.order}\t{r.ring}\t{detail}\n")
        bad = sum(not r.ok for r in reports)
        out.write(f"# {len(reports) - bad}/{len(reports)} verified\n")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


# -- oracle -------------------------------------------------------------------


def _convolve_counts(counts: list[int], r: int) -> list[int]:
    """Counts of r-tuples whose sizes add up to n, from single-object counts."""
    result = [1] + [0] * (len(counts) - 1)
    for _ in range(r):
        result = [sum(result[j] * counts[n - j] for j in range(n + 1)) for n in range(len(counts))]
    return result


def oracle_columns(spec: FamilySpec, n_max: int) -> dict[str, list[int]]:
    """Enumeration counts for n = 0..n_max, one column per independent oracle."""
    ns = range(n_max + 1)
    t = spec.t
    if spec.family == OVERPARTITION:
        return {"enumeration": [enumerate_overpartitions(n) for n in ns]}
    if spec.family == TSCHUR:
        return {
            "distinct": [oracle_t_schur(t, n) for n in ns],
            "residues": [oracle_t_schur_residues(t, n) for n in ns],
            "odd-bounded": [oracle_t_schur_regular(t, n) for n in ns],
        }
    cols = {
        "doubled-odd": [oracle_t_schur_over(t, n) for n in ns],
        "overlined": [oracle_t_schur_over_direct(t, n) for n in ns],
    }
    if spec.family == TSCHUR_OVER_TUPLE:
        cols = {k: _convolve_counts(v, spec.r) for k, v in cols.items()}
    return cols


def cmd_oracle(args, out) -> int:
    if args.n_max < 0:
        raise UsageError("--n-max must be nonnegative")
    family = args.family
    if family == OVERPARTITION and (args.t is not None or args.r is not None):
        raise UsageError("overpartition takes no -t/-r")
    if family != OVERPARTITION and args.t is None:
        raise UsageError(f"{family} needs -t")
    if family == TSCHUR_OVER_TUPLE and args.r is None:
        raise UsageError("tschur-over-tuple needs -r")
    if args.t is not None and (args.t < 3 or args.t % 2 == 0):
        raise UsageError(f"t must be an odd integer >= 3, got {args.t}")
    try:
        spec = FamilySpec(family, args.t, args.r if family == TSCHUR_OVER_TUPLE else None)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    series = family_gf(spec, args.n_max + 1).coeffs()
    cols = oracle_columns(spec, args.n_max)
    header = ["n", "series", *cols, "match"]
    rows = []
    for n in range(args.n_max + 1):
        vals = [int(series[n])] + [c[n] for c in cols.values()]
        rows.append([n, *vals, len(set(vals)) == 1])
    _emit_rows(header, rows, args.format, out, {"family": str(spec)})
    return EXIT_OK if all(r[-1] for r in rows) else EXIT_FAIL


# -- scan ---------------------------------------------------------------------


def cmd_scan(args, out) -> int:
    try:
        spec = parse_family(args.family)
        found = congruences.scan_progressions(spec, args.A, args.modulus, args.n_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    meta = {
        "status": "conjectural",
        "family": str(spec),
        "A": args.A,
        "modulus": args.modulus,
        "n_max": args.n_max,
    }
    if args.format == "json":
        out.write(json.dumps({**meta, "candidates": found}, indent=2) + "\n")
    else:
        out.write(f"# conjectural: coefficient(An+B) = 0 mod {args.modulus} for every n <= {args.n_max}\n")
        out.write("B\n" + "".join(f"{b}\n" for b in found))
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool):
    # subcommands accept the global flags too; SUPPRESS keeps them from
    # clobbering a value given before the subcommand
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--order", type=int, default=dflt(None), help="expansion order (identities and expand); default $QSERIES_DEFAULT_ORDER or 400")
    parser.add_argument("--ring", type=_ring, default=dflt(EXACT), help="'exact' or 'mod N' (expand only)")
    parser.add_argument("--jobs", type=int, default=dflt(1), help="claims verified in parallel")
    parser.add_argument("--format", choices=("tsv", "json"), default=dflt("tsv"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tschur", description=__doc__)
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    local = argparse.ArgumentParser(add_help=False)
    _global_flags(local, suppress=True)

    p = sub.add_parser("expand", parents=[local], help="print coefficients of an expression")
    p.add_argument("expression")
    p.add_argument("--let", type=_binding, action="append", default=[], metavar="NAME=INT")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify", parents=[local], help="verify the claims in a manifest")
    p.add_argument("manifest", nargs="*", help="manifest files; 'shipped:NAME' for a bundled one (default shipped:claims.manifest)")
    p.add_argument("--filter", action="append", default=[], metavar="KEY=PATTERN", help="id=... or kind=..., shell-style")
    p.add_argument("--report", metavar="PATH", help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", parents=[local], help="compare a generating function with enumeration")
    p.add_argument("family", choices=(OVERPARTITION, TSCHUR, TSCHUR_OVER, TSCHUR_OVER_TUPLE))
    p.add_argument("-t", type=int)
    p.add_argument("-r", type=int)
    p.add_argument("--n-max", type=int, default=10)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("scan", parents=[local], help="list residues B with coefficient(An+B) = 0 mod m on a prefix")
    p.add_argument("family", help="e.g. 'tschur-over(9)'")
    p.add_argument("A", type=int)
    p.add_argument("modulus", type=int)
    p.add_argument("--n-max", type=int, default=200)
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1 or (args.order is not None and args.order < 1):
        parser.error("--jobs and --order must be positive")
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"tschur {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
