"""Claim manifests.

A manifest is UTF-8 text made of stanzas separated by blank lines.  Each
stanza is a list of ``key: value`` lines; a line starting with whitespace
continues the previous value, and ``#`` starts a comment line.

Common keys: ``id``, ``kind`` (identity | dissection | congruence |
prime-family), ``cite``, ``let`` (``p=5, l=3``), ``order``, ``note``.

identity      ``lhs``, ``rhs``, optional ``ring`` (``exact`` or ``mod 32``)
dissection    ``source``, ``m``, ``r``, ``result``
congruence    ``family``, ``type`` (vanishing | relation | equality), ``A``,
              ``B``, ``mod``, ``n-max``, ``params`` (``j=1..5, beta=1..2``),
              ``alpha-max``; relations add ``scale``, ``rhs-scale``,
              ``sign``; equalities add ``rhs-family``, ``rhs-A``, ``rhs-B``,
              ``factor``
prime-family  ``family``, ``mod``, ``condition``, ``also-legendre``, ``arg``,
              ``primes`` (``auto(2)`` or a list), ``alpha-max``, ``n-max``,
              ``params``, ``p-min``
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .expr import Call, ExpressionError, Node, parse_expression
from .series import EXACT, Modular, Ring

DEFAULT_ORDER = 400


def default_order() -> int:
    return int(os.environ.get("QSERIES_DEFAULT_ORDER", DEFAULT_ORDER))


class ManifestError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)


@dataclass(frozen=True)
class Expr:
    """Expression text plus its parsed tree."""

    text: str
    node: Node

    def __str__(self):
        return self.text


@dataclass
class Claim:
    id: str
    kind: str
    cite: str = ""
    env: dict = field(default_factory=dict)
    order: int | None = None
    note: str = ""
    line: int = 0

    @property
    def ring(self) -> Ring:
        return EXACT


@dataclass
class IdentityClaim(Claim):
    lhs: Expr | None = None
    rhs: Expr | None = None
    ring_: Ring = EXACT

    @property
    def ring(self) -> Ring:
        return self.ring_


@dataclass
class DissectionClaim(Claim):
    source: Expr | None = None
    m: int = 1
    r: int = 0
    result: Expr | None = None
    ring_: Ring = EXACT

    @property
    def ring(self) -> Ring:
        return self.ring_


@dataclass
class CongruenceClaim(Claim):
    family: Expr | None = None
    type: str = "vanishing"
    A: Expr | None = None
    B: Expr | None = None
    modulus: int | None = None
    n_max: int = 200
    params: dict = field(default_factory=dict)
    alpha_max: int = 0
    scale: Expr | None = None
    rhs_scale: Expr | None = None
    sign: Expr | None = None
    rhs_family: Expr | None = None
    rhs_A: Expr | None = None
    rhs_B: Expr | None = None
    factor: Expr | None = None

    @property
    def ring(self) -> Ring:
        return EXACT if self.modulus is None else Modular(self.modulus)


@dataclass(frozen=True)
class LegendreEquals:
    a: int
    value: int

    def __str__(self):
        return f"legendre({self.a}) = {self.value}"


@dataclass(frozen=True)
class ResidueClass:
    c: int
    d: int

    def __str__(self):
        return f"p = {self.c} mod {self.d}"


@dataclass
class PrimeFamilyClaim(Claim):
    family: Expr | None = None
    modulus: int = 2
    conditions: tuple = ()
    also_legendre: tuple = ()
    arg: Expr | None = None
    primes: tuple | None = None
    auto_primes: int = 2
    alpha_max: int = 0
    n_max: int = 50
    params: dict = field(default_factory=dict)
    p_min: int = 5

    @property
    def ring(self) -> Ring:
        return Modular(self.modulus)


_KINDS = {"identity", "dissection", "congruence", "prime-family"}

_ALLOWED = {
    "identity": {"lhs", "rhs", "ring"},
    "dissection": {"source", "m", "r", "result", "ring"},
    "congruence": {
        "family", "type", "A", "B", "mod", "n-max", "params", "alpha-max", "scale",
        "rhs-scale", "sign", "rhs-family", "rhs-A", "rhs-B", "factor",
    },
    "prime-family": {
        "family", "mod", "condition", "also-legendre", "arg", "primes", "alpha-max",
        "n-max", "params", "p-min",
    },
}
_COMMON = {"id", "kind", "cite", "let", "order", "note"}


@dataclass
class _Field:
    value: str
    line: int
    col: int


def _stanzas(text: str):
    """Yield (first line number, {key: _Field}) per stanza."""
    current: dict[str, _Field] = {}
    start = None
    last_key = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            if current:
                yield start, current
            current, start, last_key = {}, None, None
            continue
        if raw.lstrip().startswith("#"):
            continue
        if raw[0] in " \t":
            if last_key is None:
                raise ManifestError("continuation line without a key", lineno, 1)
            current[last_key].value += "\n" + raw
            continue
        m = re.match(r"([A-Za-z][A-Za-z0-9-]*)\s*:\s?", raw)
        if not m:
            raise ManifestError(f"expected 'key: value', got {raw.strip()!r}", lineno, 1)
        key = m.group(1)
        if key in current:
            raise ManifestError(f"duplicate key {key!r} in stanza", lineno, 1)
        current[key] = _Field(raw[m.end():], lineno, m.end() + 1)
        start = start or lineno
        last_key = key
    if current:
        yield start, current


def _expr(f: _Field) -> Expr:
    try:
        node = parse_expression(f.value, f.line, f.col)
    except ExpressionError as exc:
        raise ManifestError(str(exc).split(" at line")[0], exc.line, exc.col) from None
    return Expr(" ".join(f.value.split()), node)


def _family(f: _Field) -> Expr:
    """``tschur-over(9)`` or ``gf(tschur-over, 9)``; stored in the ``gf`` form."""
    text = f.value.strip()
    if not text.startswith("gf("):
        m = re.fullmatch(r"([a-z-]+)\s*(?:\((.*)\))?", text, re.S)
        if not m:
            raise ManifestError(f"cannot parse family {text!r}", f.line, f.col)
        text = f"gf({m.group(1)}, {m.group(2)})" if m.group(2) else f"gf({m.group(1)})"
    try:
        node = parse_expression(text, f.line, f.col)
    except ExpressionError as exc:
        raise ManifestError(str(exc).split(" at line")[0], f.line, f.col) from None
    if not (isinstance(node, Call) and node.name == "gf"):
        raise ManifestError(f"family must be a single gf(...) atom, got {text!r}", f.line, f.col)
    return Expr(" ".join(text.split()), node)


def _int(f: _Field, name: str) -> int:
    try:
        return int(f.value.strip())
    except ValueError:
        raise ManifestError(f"{name} must be an integer, got {f.value.strip()!r}", f.line, f.col) from None


def _ring(f: _Field | None) -> Ring:
    if f is None or f.value.strip() == "exact":
        return EXACT
    m = re.fullmatch(r"mod\s+(\d+)", f.value.strip())
    if not m:
        raise ManifestError(f"ring must be 'exact' or 'mod <m>', got {f.value.strip()!r}", f.line, f.col)
    return Modular(int(m.group(1)))


def _bindings(f: _Field | None) -> dict[str, int]:
    """``p=5, l=3`` -> {'p': 5, 'l': 3}."""
    if f is None or not f.value.strip():
        return {}
    out = {}
    for part in f.value.split(","):
        m = re.fullmatch(r"\s*([A-Za-z_]\w*)\s*=\s*(-?\d+)\s*", part)
        if not m:
            raise ManifestError(f"bad binding {part.strip()!r}", f.line, f.col)
        out[m.group(1)] = int(m.group(2))
    return out


def _grid(f: _Field | None) -> dict[str, range]:
    """``j=1..5, beta=1..2`` -> {'j': range(1, 6), 'beta': range(1, 3)}."""
    if f is None or not f.value.strip():
        return {}
    out = {}
    for part in f.value.split(","):
        m = re.fullmatch(r"\s*([A-Za-z_]\w*)\s*=\s*(-?\d+)(?:\.\.(-?\d+))?\s*", part)
        if not m:
            raise ManifestError(f"bad parameter range {part.strip()!r}", f.line, f.col)
        lo = int(m.group(2))
        hi = int(m.group(3)) if m.group(3) is not None else lo
        out[m.group(1)] = range(lo, hi + 1)
    return out


def _condition(f: _Field) -> tuple:
    conds = []
    for part in re.split(r"\band\b", f.value):
        part = part.strip()
        m = re.fullmatch(r"legendre\(\s*(-?\d+)\s*\)\s*=\s*(-?1)", part)
        if m:
            conds.append(LegendreEquals(int(m.group(1)), int(m.group(2))))
            continue
        m = re.fullmatch(r"p\s*=\s*(\d+)\s+mod\s+(\d+)", part)
        if m:
            conds.append(ResidueClass(int(m.group(1)), int(m.group(2))))
            continue
        raise ManifestError(f"cannot parse prime condition {part!r}", f.line, f.col)
    return tuple(conds)


def _build(line: int, fields: dict[str, _Field]) -> Claim:
    def need(key):
        if key not in fields:
            raise ManifestError(f"missing required key {key!r}", line, 1)
        return fields[key]

    cid = need("id").value.strip()
    kind = need("kind").value.strip()
    if kind not in _KINDS:
        raise ManifestError(f"unknown kind {kind!r}", fields["kind"].line, fields["kind"].col)
    for key, f in fields.items():
        if key not in _COMMON and key not in _ALLOWED[kind]:
            raise ManifestError(f"key {key!r} is not valid for kind {kind}", f.line, 1)
    common = dict(
        id=cid,
        kind=kind,
        cite=" ".join(fields["cite"].value.split()) if "cite" in fields else "",
        env=_bindings(fields.get("let")),
        order=_int(fields["order"], "order") if "order" in fields else None,
        note=" ".join(fields["note"].value.split()) if "note" in fields else "",
        line=line,
    )
    opt = lambda k: _expr(fields[k]) if k in fields else None  # noqa: E731
    if kind == "identity":
        return IdentityClaim(**common, lhs=_expr(need("lhs")), rhs=_expr(need("rhs")), ring_=_ring(fields.get("ring")))
    if kind == "dissection":
        m = _int(need("m"), "m")
        r = _int(need("r"), "r")
        if m < 1 or not 0 <= r < m:
            raise ManifestError(f"need m >= 1 and 0 <= r < m, got m={m}, r={r}", fields["r"].line, 1)
        return DissectionClaim(
            **common, source=_expr(need("source")), m=m, r=r, result=_expr(need("result")),
            ring_=_ring(fields.get("ring")),
        )
    if kind == "congruence":
        ctype = fields["type"].value.strip() if "type" in fields else "vanishing"
        if ctype not in ("vanishing", "relation", "equality"):
            raise ManifestError(f"unknown congruence type {ctype!r}", fields["type"].line, 1)
        modulus = _int(fields["mod"], "mod") if "mod" in fields else None
        if ctype != "equality" and (modulus is None or modulus < 2):
            raise ManifestError("congruence needs 'mod' >= 2", line, 1)
        return CongruenceClaim(
            **common, family=_family(need("family")), type=ctype, A=_expr(need("A")),
            B=opt("B"), modulus=modulus,
            n_max=_int(fields["n-max"], "n-max") if "n-max" in fields else 200,
            params=_grid(fields.get("params")),
            alpha_max=_int(fields["alpha-max"], "alpha-max") if "alpha-max" in fields else 0,
            scale=opt("scale"), rhs_scale=opt("rhs-scale"), sign=opt("sign"),
            rhs_family=_family(fields["rhs-family"]) if "rhs-family" in fields else None,
            rhs_A=opt("rhs-A"), rhs_B=opt("rhs-B"), factor=opt("factor"),
        )
    # prime-family
    primes_f = fields.get("primes")
    primes, auto = None, 2
    if primes_f is not None:
        text = primes_f.value.strip()
        m = re.fullmatch(r"auto\((\d+)\)", text)
        if m:
            auto = int(m.group(1))
        else:
            try:
                primes = tuple(int(x) for x in text.split(","))
            except ValueError:
                raise ManifestError(f"primes must be auto(k) or a list, got {text!r}", primes_f.line, primes_f.col) from None
    also = ()
    if "also-legendre" in fields:
        also = tuple(int(x) for x in fields["also-legendre"].value.split(","))
    return PrimeFamilyClaim(
        **common, family=_family(need("family")), modulus=_int(need("mod"), "mod"),
        conditions=_condition(need("condition")), also_legendre=also, arg=_expr(need("arg")),
        primes=primes, auto_primes=auto,
        alpha_max=_int(fields["alpha-max"], "alpha-max") if "alpha-max" in fields else 0,
        n_max=_int(fields["n-max"], "n-max") if "n-max" in fields else 50,
        params=_grid(fields.get("params")),
        p_min=_int(fields["p-min"], "p-min") if "p-min" in fields else 5,
    )


def parse_manifest(text: str) -> list[Claim]:
    claims = []
    seen: dict[str, int] = {}
    for line, fields in _stanzas(text):
        claim = _build(line, fields)
        if claim.id in seen:
            raise ManifestError(f"duplicate claim id {claim.id!r} (first at line {seen[claim.id]})", line, 1)
        seen[claim.id] = line
        claims.append(claim)
    return claims


def register_manifest(source) -> list[Claim]:
    """Load claims from a path, or from manifest text when given a string with newlines."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and source.strip()):
        return parse_manifest(Path(source).read_text(encoding="utf-8"))
    return parse_manifest(source)


SHIPPED = ("claims.manifest", "errata.manifest")


def shipped_manifest_text(name: str = "claims.manifest") -> str:
    return resources.files("tschur.data").joinpath(name).read_text(encoding="utf-8")


def shipped_claims(name: str = "claims.manifest") -> list[Claim]:
    return parse_manifest(shipped_manifest_text(name))
