"""Checking exact series identities and dissections coefficient by coefficient."""

from __future__ import annotations

import dataclasses
import time

from .expr import BinOp, Call, Evaluator, ExpressionError, Neg, Node, Num, Pow, Q, to_text
from .manifest import DissectionClaim, Expr, IdentityClaim, default_order
from .report import COUNTEREXAMPLE, ILL_FORMED, ORDER_TOO_SMALL, VERIFIED, VerificationReport
from .series import NonUnitError, Series


def _expand(node: Node, order: int, claim) -> Series:
    return Evaluator(claim.ring, claim.env).series(node, order)


def _compare(claim, lhs_node: Node, rhs_node: Node, order: int | None) -> VerificationReport:
    start = time.perf_counter()
    order = order or claim.order or default_order()
    ring = claim.ring

    def done(status, detail, at=order):
        return VerificationReport(claim.id, status, at, detail, (time.perf_counter() - start) * 1e3, str(ring))

    try:
        lhs = _expand(lhs_node, order, claim)
        rhs = _expand(rhs_node, order, claim)
    except (NonUnitError, ExpressionError, ValueError, ZeroDivisionError) as exc:
        return done(ILL_FORMED, {"message": str(exc)}, None)
    shared = min(lhs.order, rhs.order)
    if shared < order:
        return done(ORDER_TOO_SMALL, {"needed": order, "had": shared}, shared)
    idx = lhs.first_difference(rhs)
    if idx is not None:
        return done(COUNTEREXAMPLE, {"index": idx, "lhs": int(lhs[idx]), "rhs": int(rhs[idx])})
    return done(VERIFIED, {})


def verify_identity(claim: IdentityClaim, order: int | None = None) -> VerificationReport:
    """Expand both sides to ``order`` (claim order, then the default) and compare."""
    return _compare(claim, claim.lhs.node, claim.rhs.node, order)


def verify_dissection(claim: DissectionClaim, order: int | None = None) -> VerificationReport:
    """Extract class ``r`` mod ``m`` of the source and compare with the result."""
    extracted = Call("dissect", (claim.source.node, Num(claim.m), Num(claim.r)))
    return _compare(claim, extracted, claim.result.node, order)


def run_claim(claim, order: int | None = None) -> VerificationReport:
    if isinstance(claim, DissectionClaim):
        return verify_dissection(claim, order)
    if isinstance(claim, IdentityClaim):
        return verify_identity(claim, order)
    raise TypeError(f"not an identity claim: {claim.kind}")


# -- mutation ------------------------------------------------------------------


def _terms(node: Node) -> int:
    """Number of top-level summands."""
    if isinstance(node, BinOp) and node.op in "+-":
        return _terms(node.left) + 1
    return 1


def flip_sign(node: Node, which: int = 0) -> Node:
    """Negate the ``which``-th top-level summand (counted from the left)."""
    count = _terms(node)
    which %= count
    if count == 1:
        return Neg(node)
    # the last summand is node.right; earlier ones live in node.left
    if which == count - 1:
        return BinOp("+" if node.op == "-" else "-", node.left, node.right)
    return BinOp(node.op, flip_sign(node.left, which), node.right)


def mutate(claim, which: int = 0):
    """A copy of an identity/dissection claim with one right-hand sign flipped."""
    attr = "result" if isinstance(claim, DissectionClaim) else "rhs"
    node = flip_sign(getattr(claim, attr).node, which)
    return dataclasses.replace(claim, **{attr: Expr(to_text(node), node)})


def perturb(claim, index: int = 0):
    """A copy with ``q^index`` added to the right-hand side.

    Catches what a sign flip cannot: modulo 32, ``16 x`` and ``-16 x`` agree.
    """
    attr = "result" if isinstance(claim, DissectionClaim) else "rhs"
    node = BinOp("+", getattr(claim, attr).node, Pow(Q(), Num(index)))
    return dataclasses.replace(claim, **{attr: Expr(to_text(node), node)})


def summand_count(claim) -> int:
    attr = "result" if isinstance(claim, DissectionClaim) else "rhs"
    return _terms(getattr(claim, attr).node)
