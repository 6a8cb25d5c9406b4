"""Expression language for eta quotients and theta series.

Grammar (whitespace insignificant)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' expo)?
    expo   := ['-'] (int | name | call | '(' expr ')')
    base   := int | 'q' | 'f'<int> | 'phi' | 'psi' | name | call | '(' expr ')'
    call   := name '(' expr (',' expr)* ')'

Names other than the reserved atoms are integer variables (bound by a
manifest ``let:`` line, a parameter grid, or ``sum``).  Calls:

    f(k)                    eta atom with a computed subscript
    theta(sa, ea, sb, eb)   Ramanujan f(sa q^ea, sb q^eb)
    Bk(p, k), Bk2(p, k)     B_k(q) and 2 B_k(q)
    gf(family, ...)         generating function, e.g. gf(tschur-over, 9)
    dissect(e, m, r)        coefficients of q^(mn+r) in e
    sub(e, k), neg(e)       e(q^k), e(-q)
    sum(k, lo, hi, e, skip...)  sum of e over k = lo..hi, skipping listed values
    sel6(p)                 (p-1)/6 if p = 1 mod 6, (-p-1)/6 if p = -1 mod 6
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import series as S
from .families import FamilySpec
from .series import EXACT, Ring, Series
from .special import (
    B_k_series,
    EtaQuotientSpec,
    ThetaMonomialPair,
    eta_quotient,
    phi,
    psi,
    theta_f,
)


class ExpressionError(ValueError):
    """Parse or evaluation error, with a 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(message + where)


# -- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Q:
    pass


@dataclass(frozen=True)
class Eta:
    k: "Node"


@dataclass(frozen=True)
class Phi:
    pass


@dataclass(frozen=True)
class Psi:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: "Node"


Node = Union[Num, Q, Eta, Phi, Psi, Var, Call, Neg, BinOp, Pow]

FUNCTIONS = {"f", "theta", "Bk", "Bk2", "gf", "dissect", "sub", "neg", "sum", "sel6"}
_FAMILY_WORDS = {"overpartition", "tschur", "tschur-over", "tschur-over-tuple"}


# -- tokenizer -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<name>(?:tschur-over-tuple|tschur-over)(?![A-Za-z0-9_-])|[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, line0: int = 1, col0: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    line, col = line0, col0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ExpressionError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, line, col))
        for ch in chunk:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        pos = m.end()
    tokens.append(Token("end", "", line, col))
    return tokens


# -- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ExpressionError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self) -> Node:
        if self.accept("-"):
            node = Neg(self.term())
        else:
            self.accept("+")
            node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        node = self.base()
        if self.accept("^"):
            node = Pow(node, self.exponent())
        return node

    def exponent(self) -> Node:
        if self.accept("-"):
            return Neg(self.exponent_atom())
        return self.exponent_atom()

    def exponent_atom(self) -> Node:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return Num(int(tok.text))
        if tok.kind == "name":
            self.i += 1
            if self.tok.kind == "op" and self.tok.text == "(":
                return self.call(tok)
            return self.name_atom(tok)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.error("exponent must be an integer, a variable, a call or a parenthesized expression")

    def base(self) -> Node:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return Num(int(tok.text))
        if tok.kind == "name":
            self.i += 1
            if self.tok.kind == "op" and self.tok.text == "(":
                return self.call(tok)
            return self.name_atom(tok)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.error(f"unexpected {tok.text or 'end of input'!r}")

    def name_atom(self, tok: Token) -> Node:
        name = tok.text
        if name == "q":
            return Q()
        if name == "phi":
            return Phi()
        if name == "psi":
            return Psi()
        m = re.fullmatch(r"f(\d+)", name)
        if m:
            k = int(m.group(1))
            if k == 0:
                self.error("eta subscript must be positive (f0 is not defined)", tok)
            return Eta(Num(k))
        if name in FUNCTIONS:
            self.error(f"{name} needs arguments", tok)
        return Var(name)

    def call(self, tok: Token) -> Node:
        name = tok.text
        if name not in FUNCTIONS:
            self.error(f"unknown function {name!r}", tok)
        self.expect("(")
        args = [self.expr()]
        while self.accept(","):
            args.append(self.expr())
        self.expect(")")
        arity = {"f": 1, "theta": 4, "Bk": 2, "Bk2": 2, "dissect": 3, "sub": 2, "neg": 1, "sel6": 1}
        if name in arity and len(args) != arity[name]:
            self.error(f"{name} takes {arity[name]} arguments, got {len(args)}", tok)
        if name == "sum":
            if len(args) < 4 or not isinstance(args[0], Var):
                self.error("sum needs (var, lo, hi, body, skip...)", tok)
        if name == "gf" and not (isinstance(args[0], Var) and args[0].name in _FAMILY_WORDS):
            self.error("gf needs a family name as first argument", tok)
        if name == "f":
            return Eta(args[0])
        return Call(name, tuple(args))


def parse_expression(text: str, line: int = 1, col: int = 1) -> Node:
    return _Parser(tokenize(text, line, col)).parse()


# -- pretty printer --------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node: Node) -> str:
    return _fmt(node, 0)


def _fmt(node: Node, prec: int) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Q):
        return "q"
    if isinstance(node, Phi):
        return "phi"
    if isinstance(node, Psi):
        return "psi"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Eta):
        if isinstance(node.k, Num):
            return f"f{node.k.value}"
        return f"f({_fmt(node.k, 0)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(_fmt(a, 0) for a in node.args)})"
    if isinstance(node, Neg):
        s = "-" + _fmt(node.operand, 2)
        return f"({s})" if prec > 0 else s
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        # left-associative: the right operand binds one level tighter
        s = f"{_fmt(node.left, p)}{node.op}{_fmt(node.right, p + 1)}"
        return f"({s})" if p < prec else s
    if isinstance(node, Pow):
        e = node.exp
        if isinstance(e, (Num, Var, Call)):
            es = _fmt(e, 0)
        elif isinstance(e, Neg) and isinstance(e.operand, (Num, Var)):
            es = "-" + _fmt(e.operand, 0)
        else:
            es = f"({_fmt(e, 0)})"
        base = _fmt(node.base, 3)
        if isinstance(node.base, Pow):
            base = f"({base})"
        return f"{base}^{es}"
    raise TypeError(node)


# -- evaluation ------------------------------------------------------------

Value = Union[Fraction, Series]


class Evaluator:
    """Evaluate an AST to a series of a given order in a given ring.

    Subtrees without series atoms evaluate to exact rationals; they act as
    scalars, exponents, subscripts and function arguments.
    """

    def __init__(self, ring: Ring = EXACT, env: dict[str, int] | None = None):
        self.ring = ring
        self.env = dict(env or {})

    def series(self, node: Node, order: int) -> Series:
        v = self.eval(node, order)
        if isinstance(v, Series):
            return v.truncate(order)
        return S.constant(self._int(v, "a constant"), order, self.ring)

    def integer(self, node: Node) -> int:
        v = self.eval(node, 1)
        if isinstance(v, Series):
            raise ExpressionError(f"expected an integer, got a series: {to_text(node)}")
        return self._int(v, to_text(node))

    def _int(self, v: Fraction, what: str) -> int:
        if v.denominator != 1:
            raise ExpressionError(f"{what} evaluates to the non-integer {v}")
        return int(v)

    def eval(self, node: Node, N: int) -> Value:
        mono = self._monomial(node)
        if mono is not None and mono.factors:
            return eta_quotient(mono, N, self.ring)
        method = getattr(self, "_eval_" + type(node).__name__)
        return method(node, N)

    # eta-monomial fast path: products/quotients/powers of f_k, q and integers
    def _monomial(self, node: Node) -> EtaQuotientSpec | None:
        if isinstance(node, Eta):
            return EtaQuotientSpec(((self.integer(node.k), 1),))
        if isinstance(node, Q):
            return EtaQuotientSpec((), 1)
        if isinstance(node, Num):
            return EtaQuotientSpec((), 0, node.value)
        if isinstance(node, Pow):
            base = self._monomial(node.base)
            if base is None:
                return None
            e = self.integer(node.exp)
            try:
                return base**e
            except ValueError:
                return None
        if isinstance(node, BinOp) and node.op in "*/":
            left = self._monomial(node.left)
            if left is None:
                return None
            right = self._monomial(node.right)
            if right is None:
                return None
            if node.op == "*":
                return left * right
            if right.prefactor_qpower or right.prefactor_scalar not in (1, -1):
                return None
            return left * right ** -1
        return None

    def _eval_Num(self, node: Num, N):
        return Fraction(node.value)

    def _eval_Var(self, node: Var, N):
        if node.name not in self.env:
            raise ExpressionError(f"unbound variable {node.name!r}")
        return Fraction(self.env[node.name])

    def _eval_Q(self, node, N):
        return S.monomial(1, 1, N, self.ring)

    def _eval_Eta(self, node: Eta, N):
        return eta_quotient(EtaQuotientSpec(((self.integer(node.k), 1),)), N, self.ring)

    def _eval_Phi(self, node, N):
        return phi(N, self.ring)

    def _eval_Psi(self, node, N):
        return psi(N, self.ring)

    def _eval_Neg(self, node: Neg, N):
        v = self.eval(node.operand, N)
        return -v

    def _eval_BinOp(self, node: BinOp, N):
        a = self.eval(node.left, N)
        b = self.eval(node.right, N)
        if node.op == "+":
            return self._lift(a, N) + self._lift(b, N) if _any_series(a, b) else a + b
        if node.op == "-":
            return self._lift(a, N) - self._lift(b, N) if _any_series(a, b) else a - b
        if node.op == "*":
            if not _any_series(a, b):
                return a * b
            if isinstance(a, Fraction):
                return S.scalar_mul(self._int(a, "scalar"), b)
            if isinstance(b, Fraction):
                return S.scalar_mul(self._int(b, "scalar"), a)
            return S.mul(a, b)
        # division
        if not _any_series(a, b):
            if b == 0:
                raise ExpressionError(f"division by zero in {to_text(node)}")
            return a / b
        if isinstance(b, Fraction):
            return self._divide_scalar(a, self._int(b, "divisor"), node)
        return S.mul(self._lift(a, N), S.invert(b))

    def _divide_scalar(self, a: Series, d: int, node: Node) -> Series:
        if self.ring.exact:
            bad = [i for i, c in enumerate(a.coeffs()) if c % d]
            if bad:
                raise ExpressionError(
                    f"coefficient {bad[0]} is not divisible by {d} in {to_text(node)}"
                )
            return S.Series(self.ring, [c // d for c in a.coeffs()])
        return S.scalar_mul(self.ring.unit_inverse(d % self.ring.modulus), a)

    def _eval_Pow(self, node: Pow, N):
        base = self.eval(node.base, N)
        e = self.integer(node.exp)
        if isinstance(base, Fraction):
            if e < 0 and base == 0:
                raise ExpressionError("zero to a negative power")
            return base**e
        return S.pow(base, e)

    def _lift(self, v: Value, N: int) -> Series:
        if isinstance(v, Series):
            return v
        return S.constant(self._int(v, "a constant"), N, self.ring)

    def _eval_Call(self, node: Call, N):
        return getattr(self, "_call_" + node.name)(node.args, N)

    def _call_sel6(self, args, N):
        p = self.integer(args[0])
        if p % 6 == 1:
            return Fraction((p - 1) // 6)
        if p % 6 == 5:
            return Fraction((-p - 1) // 6)
        raise ExpressionError(f"sel6 needs p = +-1 mod 6, got {p}")

    def _call_theta(self, args, N):
        sa, ea, sb, eb = (self.integer(a) for a in args)
        return theta_f(ThetaMonomialPair(sa, ea, sb, eb), N, self.ring)

    def _call_Bk(self, args, N):
        p, k = (self.integer(a) for a in args)
        try:
            return B_k_series(p, k, N, self.ring)
        except ValueError as exc:
            raise ExpressionError(str(exc)) from None

    def _call_Bk2(self, args, N):
        p, k = (self.integer(a) for a in args)
        return B_k_series(p, k, N, self.ring, doubled=True)

    def _call_gf(self, args, N):
        from .families import family_gf

        kind = args[0].name
        params = [self.integer(a) for a in args[1:]]
        return family_gf(FamilySpec(kind, *params), N, self.ring)

    def _call_dissect(self, args, N):
        m = self.integer(args[1])
        r = self.integer(args[2])
        if m < 1 or not 0 <= r < m:
            raise ExpressionError(f"dissect needs m >= 1 and 0 <= r < m, got m={m}, r={r}")
        inner = self.series(args[0], m * (N - 1) + r + 1)
        return S.extract_dissection(inner, m, r)

    def _call_sub(self, args, N):
        k = self.integer(args[1])
        if k < 1:
            raise ExpressionError(f"sub needs a positive exponent, got {k}")
        inner = self.series(args[0], -(-(N - 1) // k) + 1)
        return S.substitute_power(inner, k, N)

    def _call_neg(self, args, N):
        return S.substitute_neg(self.series(args[0], N))

    def _call_sum(self, args, N):
        var = args[0].name
        lo = self.integer(args[1])
        hi = self.integer(args[2])
        skip = {self.integer(a) for a in args[4:]}
        saved = self.env.get(var)
        total: Value = Fraction(0)
        try:
            for k in range(lo, hi + 1):
                if k in skip:
                    continue
                self.env[var] = k
                term = self.eval(args[3], N)
                if _any_series(total, term):
                    total = self._lift(total, N) + self._lift(term, N)
                else:
                    total = total + term
        finally:
            if saved is None:
                self.env.pop(var, None)
            else:
                self.env[var] = saved
        return total


def _any_series(*vals) -> bool:
    return any(isinstance(v, Series) for v in vals)


def evaluate(text_or_node, order: int, ring: Ring = EXACT, env: dict[str, int] | None = None) -> Series:
    node = parse_expression(text_or_node) if isinstance(text_or_node, str) else text_or_node
    return Evaluator(ring, env).series(node, order)


def eta_atoms(node: Node) -> list[Eta]:
    """All eta atoms in the tree, in reading order."""
    out = []

    def walk(n):
        if isinstance(n, Eta):
            out.append(n)
        elif isinstance(n, (Neg,)):
            walk(n.operand)
        elif isinstance(n, BinOp):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Pow):
            walk(n.base)
            walk(n.exp)
        elif isinstance(n, Call):
            for a in n.args:
                walk(a)

    walk(node)
    return out
