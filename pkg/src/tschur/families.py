"""Counting functions for overpartitions and t-Schur (over)partitions.

Each family has a generating function (an eta quotient) and, separately,
brute-force enumeration counts that never touch the series code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .series import EXACT, Ring, Series, pow
from .special import EtaQuotientSpec, eta_quotient

OVERPARTITION = "overpartition"
TSCHUR = "tschur"
TSCHUR_OVER = "tschur-over"
TSCHUR_OVER_TUPLE = "tschur-over-tuple"

_KINDS = (OVERPARTITION, TSCHUR, TSCHUR_OVER, TSCHUR_OVER_TUPLE)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    t: int | None = None
    r: int | None = None

    def __post_init__(self):
        if self.family not in _KINDS:
            raise ValueError(f"unknown family {self.family!r}; expected one of {_KINDS}")
        if self.family == OVERPARTITION:
            if self.t is not None or self.r is not None:
                raise ValueError("overpartition takes no parameters")
            return
        if self.t is None or self.t < 3 or self.t % 2 == 0:
            raise ValueError(f"t must be an odd integer >= 3, got {self.t}")
        if self.family == TSCHUR_OVER_TUPLE:
            if self.r is None or self.r < 1:
                raise ValueError(f"r must be >= 1, got {self.r}")
        elif self.r is not None:
            raise ValueError(f"{self.family} takes no tuple parameter")

    def eta_spec(self) -> EtaQuotientSpec:
        t = self.t
        if self.family == OVERPARTITION:
            # (-q;q)_inf / (q;q)_inf = f2 / f1^2
            return EtaQuotientSpec(((2, 1), (1, -2)))
        if self.family == TSCHUR:
            return EtaQuotientSpec(((2, 1), (t, 1), (1, -1), (2 * t, -1)))
        base = EtaQuotientSpec(((2, 3), (t, 2), (4 * t, 1), (1, -2), (4, -1), (2 * t, -3)))
        if self.family == TSCHUR_OVER:
            return base
        return base**self.r

    def __str__(self):
        if self.family == OVERPARTITION:
            return OVERPARTITION
        if self.family == TSCHUR_OVER_TUPLE:
            return f"{self.family}({self.t},{self.r})"
        return f"{self.family}({self.t})"


_FAMILY_RE = re.compile(r"^\s*([a-z-]+)\s*(?:\(([^)]*)\))?\s*$")


def parse_family(text: str) -> FamilySpec:
    """Parse ``tschur-over(9)`` / ``tschur-over-tuple(3,17)`` / ``overpartition``."""
    m = _FAMILY_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse family {text!r}")
    args = [int(a) for a in m.group(2).split(",")] if m.group(2) else []
    return FamilySpec(m.group(1), *args)


def family_gf(spec: FamilySpec, N: int, ring: Ring = EXACT) -> Series:
    if spec.family == TSCHUR_OVER_TUPLE and spec.r > 1:
        # r-th power of one expansion: far fewer products than expanding f_k^{r e}
        return pow(family_gf(FamilySpec(TSCHUR_OVER, spec.t), N, ring), spec.r)
    return eta_quotient(spec.eta_spec(), N, ring)


# -- enumeration oracles ---------------------------------------------------


def _count(n: int, parts: tuple[int, ...], weight: Callable[[int, int], int]) -> int:
    """Sum over multisets of ``parts`` with total n of prod weight(part, mult)."""

    @lru_cache(maxsize=None)
    def go(rem: int, i: int) -> int:
        if rem == 0:
            return 1
        if i == len(parts):
            return 0
        p = parts[i]
        total = 0
        mult = 0
        while mult * p <= rem:
            w = weight(p, mult)
            if w:
                total += w * go(rem - mult * p, i + 1)
            mult += 1
        return total

    return go(n, 0)


def enumerate_overpartitions(n: int, allowed_part: Callable[[int], bool] = lambda p: True) -> int:
    """Overpartitions of n into allowed parts: each distinct part doubles the count."""
    parts = tuple(p for p in range(n, 0, -1) if allowed_part(p))
    return _count(n, parts, lambda p, mult: 1 if mult == 0 else 2)


def t_schur_parts(t: int, bound: int) -> list[int]:
    """Parts up to ``bound`` congruent mod 2t to an element of {1,3,...,2t-1} minus {t}."""
    residues = set(range(1, 2 * t, 2)) - {t}
    return [p for p in range(1, bound + 1) if p % (2 * t) in residues]


def oracle_t_schur(t: int, n: int) -> int:
    """Partitions of n into distinct parts not divisible by t."""
    parts = tuple(p for p in range(n, 0, -1) if p % t)
    return _count(n, parts, lambda p, mult: 1 if mult <= 1 else 0)


def oracle_t_schur_regular(t: int, n: int) -> int:
    """Partitions of n into odd parts, each occurring fewer than t times."""
    parts = tuple(p for p in range(n, 0, -1) if p % 2)
    return _count(n, parts, lambda p, mult: 1 if mult < t else 0)


def oracle_t_schur_residues(t: int, n: int) -> int:
    """Partitions of n into parts from the residue classes defining t-Schur partitions."""
    parts = tuple(sorted(t_schur_parts(t, n), reverse=True))
    return _count(n, parts, lambda p, mult: 1)


def oracle_t_schur_over(t: int, n: int) -> int:
    """Partitions of 2n into parts not divisible by t, odd parts appearing
    exactly twice (or not at all) and even parts distinct."""

    def weight(p, mult):
        if mult == 0:
            return 1
        if p % 2:
            return 1 if mult == 2 else 0
        return 1 if mult == 1 else 0

    parts = tuple(p for p in range(2 * n, 0, -1) if p % t)
    return _count(2 * n, parts, weight)


def oracle_t_schur_over_direct(t: int, n: int) -> int:
    """Overpartitions of n into odd parts not divisible by t."""
    return enumerate_overpartitions(n, lambda p: p % 2 == 1 and p % t != 0)
