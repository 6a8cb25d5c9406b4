"""Named q-series: Euler products, q-Pochhammer symbols, theta functions.

Everything is generated from a bilateral sum or a finite product; no
coefficient tables are stored.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

from .series import (
    EXACT,
    Ring,
    Series,
    _zeros,
    invert,
    mul,
    mul_qpower,
    one,
    pow,
    scalar_mul,
)

INFINITE = None


@dataclass(frozen=True)
class EtaQuotientSpec:
    """``scalar * q^qpower * prod f_k^e``.  Normalized on construction."""

    factors: tuple[tuple[int, int], ...] = ()
    prefactor_qpower: int = 0
    prefactor_scalar: int = 1

    def __post_init__(self):
        merged: dict[int, int] = {}
        for k, e in self.factors:
            if k < 1:
                raise ValueError(f"eta subscript must be positive, got f{k}")
            merged[k] = merged.get(k, 0) + e
        norm = tuple(sorted((k, e) for k, e in merged.items() if e))
        object.__setattr__(self, "factors", norm)
        if self.prefactor_qpower < 0:
            raise ValueError("q-power prefactor must be nonnegative")

    def __mul__(self, other: "EtaQuotientSpec") -> "EtaQuotientSpec":
        return EtaQuotientSpec(
            self.factors + other.factors,
            self.prefactor_qpower + other.prefactor_qpower,
            self.prefactor_scalar * other.prefactor_scalar,
        )

    def __pow__(self, e: int) -> "EtaQuotientSpec":
        if e < 0 and self.prefactor_qpower:
            raise ValueError("cannot invert a q-power prefactor")
        if e < 0 and self.prefactor_scalar not in (1, -1):
            raise ValueError("cannot invert a non-unit scalar prefactor")
        return EtaQuotientSpec(
            tuple((k, x * e) for k, x in self.factors),
            self.prefactor_qpower * e,
            self.prefactor_scalar**e if e >= 0 else self.prefactor_scalar ** (-e),
        )

    def weight_text(self) -> str:
        num = [f"f{k}^{e}" if e != 1 else f"f{k}" for k, e in self.factors if e > 0]
        den = [f"f{k}^{-e}" if e != -1 else f"f{k}" for k, e in self.factors if e < 0]
        top = "*".join(num) or "1"
        return top if not den else f"{top}/({'*'.join(den)})"


@dataclass(frozen=True)
class ThetaMonomialPair:
    """Arguments ``a = a_sign q^a_exp``, ``b = b_sign q^b_exp`` of ``f(a, b)``."""

    a_sign: int
    a_exp: int
    b_sign: int
    b_exp: int

    def __post_init__(self):
        if self.a_sign not in (1, -1) or self.b_sign not in (1, -1):
            raise ValueError("theta signs must be +1 or -1")
        if self.a_exp < 1 or self.b_exp < 1:
            raise ValueError("theta exponents must be positive")


def pentagonal_terms(limit: int):
    """Yield ``(j, j(3j-1)/2)`` for all integers j with exponent below ``limit``."""
    yield 0, 0
    j = 1
    while True:
        e1 = j * (3 * j - 1) // 2
        if e1 >= limit:
            break
        yield j, e1
        e2 = j * (3 * j + 1) // 2
        if e2 < limit:
            yield -j, e2
        j += 1


@lru_cache(maxsize=512)
def euler_f(k: int, N: int, ring: Ring = EXACT) -> Series:
    """``f_k = prod_{n>=1} (1 - q^{kn})`` to order N, by the pentagonal number theorem."""
    if k < 1:
        raise ValueError(f"f_k needs k >= 1, got {k}")
    if N < 1:
        raise ValueError("order must be positive")
    arr = _zeros(N, ring)
    for j, e in pentagonal_terms((N + k - 1) // k):
        arr[k * e] = ring.reduce(-1 if j % 2 else 1)
    return Series(ring, arr, _trusted=True)


def pochhammer(a_sign: int, a_exp: int, q_step: int, n, N: int, ring: Ring = EXACT) -> Series:
    """``(a; q^step)_n`` with ``a = a_sign q^a_exp``; ``n=None`` means infinite."""
    if a_sign not in (1, -1):
        raise ValueError("a_sign must be +1 or -1")
    if a_exp < 0 or q_step < 1:
        raise ValueError("need a_exp >= 0 and q_step >= 1")
    if n is INFINITE and a_exp == 0 and a_sign == 1:
        raise ValueError("(1; q)_inf vanishes identically")
    c = [int(x) for x in one(N, ring).array]
    k = 1
    while n is INFINITE or k <= n:
        e = a_exp + q_step * (k - 1)
        if e >= N:
            break
        # multiply by (1 - a_sign q^e), high indices first so each is read once
        if e == 0:
            c = [(1 - a_sign) * x for x in c]
        else:
            for i in range(N - 1, e - 1, -1):
                c[i] -= a_sign * c[i - e]
        k += 1
    return Series(ring, c)


def theta_f(pair: ThetaMonomialPair, N: int, ring: Ring = EXACT) -> Series:
    """Ramanujan's ``f(a, b) = sum_{n in Z} a^{n(n+1)/2} b^{n(n-1)/2}`` to order N."""
    arr = _zeros(N, ring)
    for n in _theta_range(pair.a_exp, pair.b_exp, N):
        tri_a = n * (n + 1) // 2
        tri_b = n * (n - 1) // 2
        e = pair.a_exp * tri_a + pair.b_exp * tri_b
        if e < N:
            s = (pair.a_sign if tri_a % 2 else 1) * (pair.b_sign if tri_b % 2 else 1)
            arr[e] = ring.reduce(int(arr[e]) + s)
    return Series(ring, arr, _trusted=True)


def _quadratic_range(a2: int, a1: int, N: int) -> range:
    """Integers n with ``(a2 n^2 + a1 n)/2 < N`` (a2 > 0), padded by one each side."""
    disc = math.isqrt(a1 * a1 + 8 * a2 * N) + 1
    lo = (-a1 - disc) // (2 * a2) - 1
    hi = (-a1 + disc) // (2 * a2) + 1
    return range(lo, hi + 1)


def _theta_range(ea: int, eb: int, N: int) -> range:
    return _quadratic_range(ea + eb, ea - eb, N)


def phi(N: int, ring: Ring = EXACT) -> Series:
    """``phi(q) = f_2^5 / (f_1^2 f_4^2)``."""
    return eta_quotient(EtaQuotientSpec(((2, 5), (1, -2), (4, -2))), N, ring)


def psi(N: int, ring: Ring = EXACT) -> Series:
    """``psi(q) = f_2^2 / f_1``."""
    return eta_quotient(EtaQuotientSpec(((2, 2), (1, -1))), N, ring)


def phi_theta(N: int, ring: Ring = EXACT) -> Series:
    return theta_f(ThetaMonomialPair(1, 1, 1, 1), N, ring)


def psi_theta(N: int, ring: Ring = EXACT) -> Series:
    return theta_f(ThetaMonomialPair(1, 1, 1, 3), N, ring)


def B_k_series(p: int, k: int, N: int, ring: Ring = EXACT, *, doubled: bool = False) -> Series:
    """``B_k(q) = 1/2 sum_n (-1)^n (2pn+2k+1) q^{(pn^2+(2k+1)n)/2}``.

    The bilateral terms pair up inside ``B_k`` only when ``2k+1 = p``; for
    other k the series is half-integral and only ``doubled=True`` (which
    returns ``2 B_k``) can be represented.
    """
    if p < 3 or not _is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    acc = [0] * N
    c = 2 * k + 1
    for n in _quadratic_range(p, c, N):
        e2 = p * n * n + c * n
        if e2 < 0:
            raise ValueError(f"B_{k} for p={p} has a negative exponent; not a power series")
        e = e2 // 2
        if e < N:
            acc[e] += (-1 if n % 2 else 1) * (2 * p * n + c)
    if doubled:
        return Series(ring, acc)
    odd = [i for i, v in enumerate(acc) if v % 2]
    if odd:
        raise ValueError(
            f"B_{k} for p={p} has a half-integer coefficient at q^{odd[0]}; "
            "use doubled=True for 2*B_k"
        )
    return Series(ring, [v // 2 for v in acc])


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


_quotient_lock = threading.Lock()
_quotient_cache: dict = {}


def eta_quotient(spec: EtaQuotientSpec, N: int, ring: Ring = EXACT) -> Series:
    """Expand ``spec`` to order N in ``ring``."""
    key = (spec, N, ring)
    with _quotient_lock:
        hit = _quotient_cache.get(key)
    if hit is not None:
        return hit
    j = spec.prefactor_qpower
    if j >= N:
        result = scalar_mul(0, one(N, ring))
    else:
        inner = N - j
        acc = one(inner, ring)
        for k, e in spec.factors:
            fk = euler_f(k, inner, ring)
            acc = mul(acc, pow(fk, e) if e > 0 else pow(invert(fk), -e))
        result = mul_qpower(scalar_mul(spec.prefactor_scalar, acc), j)
    with _quotient_lock:
        if len(_quotient_cache) > 256:
            _quotient_cache.clear()
        _quotient_cache[key] = result
    return result
