"""Truncated formal power series in q over Z or Z/mZ.

A :class:`Series` knows its coefficients at indices ``0 .. order-1`` and
nothing beyond.  Every operation propagates the order it can justify, so a
comparison between two series can only ever succeed on known coefficients.

Exact series store Python integers (numpy ``object`` arrays); modular series
store ``int64`` residues in ``[0, m)``.
"""

from __future__ import annotations

import builtins
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Ring",
    "EXACT",
    "Modular",
    "Series",
    "RingMismatchError",
    "NonUnitError",
    "make_series",
    "one",
    "zero",
    "monomial",
    "add",
    "sub",
    "negate",
    "scalar_mul",
    "mul",
    "invert",
    "invert_recurrence",
    "pow",
    "substitute_power",
    "substitute_neg",
    "mul_qpower",
    "extract_dissection",
    "reduce_mod",
]


class RingMismatchError(ValueError):
    pass


class NonUnitError(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: exact integers when ``modulus`` is None, else Z/mZ."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")

    @property
    def exact(self) -> bool:
        return self.modulus is None

    def reduce(self, x: int) -> int:
        return x if self.modulus is None else x % self.modulus

    def is_unit(self, x: int) -> bool:
        if self.modulus is None:
            return x in (1, -1)
        from math import gcd

        return gcd(x, self.modulus) == 1

    def unit_inverse(self, x: int) -> int:
        if not self.is_unit(x):
            raise NonUnitError(f"{x} is not a unit in {self}")
        if self.modulus is None:
            return x
        return builtins.pow(x, -1, self.modulus)

    def __str__(self):
        return "ZZ" if self.modulus is None else f"ZZ/{self.modulus}"


EXACT = Ring()


def Modular(m: int) -> Ring:
    return Ring(int(m))


def _as_array(values, ring: Ring) -> np.ndarray:
    if ring.exact:
        arr = np.empty(len(values), dtype=object)
        arr[:] = [int(v) for v in values]
    else:
        m = ring.modulus
        if isinstance(values, np.ndarray) and values.dtype != object:
            arr = np.mod(values.astype(np.int64), m)
        else:
            arr = np.array([int(v) % m for v in values], dtype=np.int64)
    return arr


class Series:
    """Immutable truncated power series.  ``len(s)`` is the order."""

    __slots__ = ("ring", "_c")

    def __init__(self, ring: Ring, coeffs, *, _trusted: bool = False):
        if not _trusted:
            if len(coeffs) == 0:
                raise ValueError("a series needs at least one known coefficient")
            coeffs = _as_array(coeffs, ring)
        coeffs.flags.writeable = False
        self.ring = ring
        self._c = coeffs

    # -- container protocol -------------------------------------------------
    @property
    def order(self) -> int:
        return len(self._c)

    def __len__(self):
        return len(self._c)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return [int(x) for x in self._c[idx]]
        if idx < 0 or idx >= len(self._c):
            raise IndexError(f"coefficient {idx} is beyond the known order {len(self._c)}")
        return int(self._c[idx])

    def coeffs(self) -> list[int]:
        return [int(x) for x in self._c]

    @property
    def array(self) -> np.ndarray:
        return self._c

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        if order < 1:
            raise ValueError("order must be positive")
        return Series(self.ring, self._c[:order], _trusted=True)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.order == other.order
            and all(int(a) == int(b) for a, b in zip(self._c, other._c))
        )

    def __hash__(self):
        return hash((self.ring, tuple(self.coeffs())))

    def agrees_with(self, other: "Series") -> bool:
        """Equality on the shared order."""
        _check_ring(self, other)
        n = min(self.order, other.order)
        return all(int(a) == int(b) for a, b in zip(self._c[:n], other._c[:n]))

    def first_difference(self, other: "Series") -> int | None:
        _check_ring(self, other)
        n = min(self.order, other.order)
        diff = np.nonzero(self._c[:n] != other._c[:n])[0]
        return int(diff[0]) if len(diff) else None

    def __repr__(self):
        shown = self.coeffs()[:8]
        tail = ", ..." if self.order > 8 else ""
        return f"Series({self.ring}, order={self.order}, [{', '.join(map(str, shown))}{tail}])"

    # -- operators ----------------------------------------------------------
    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        if isinstance(other, (int, np.integer)):
            return constant(int(other), self.order, self.ring)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else sub(other, self)

    def __neg__(self):
        return negate(self)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return scalar_mul(int(other), self)
        if isinstance(other, Series):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return pow(self, e)


def _check_ring(a: Series, b: Series):
    if a.ring != b.ring:
        raise RingMismatchError(f"ring mismatch: {a.ring} vs {b.ring}")


def make_series(ring: Ring, coeffs: Iterable[int]) -> Series:
    coeffs = list(coeffs)
    return Series(ring, coeffs)


def zero(order: int, ring: Ring = EXACT) -> Series:
    return constant(0, order, ring)


def one(order: int, ring: Ring = EXACT) -> Series:
    return constant(1, order, ring)


def constant(c: int, order: int, ring: Ring = EXACT) -> Series:
    if order < 1:
        raise ValueError("order must be positive")
    arr = _zeros(order, ring)
    arr[0] = ring.reduce(c)
    return Series(ring, arr, _trusted=True)


def monomial(c: int, j: int, order: int, ring: Ring = EXACT) -> Series:
    """``c * q^j`` known to ``order``."""
    arr = _zeros(order, ring)
    if j < order:
        arr[j] = ring.reduce(c)
    return Series(ring, arr, _trusted=True)


def _zeros(n: int, ring: Ring) -> np.ndarray:
    if ring.exact:
        arr = np.empty(n, dtype=object)
        arr[:] = 0
        return arr
    return np.zeros(n, dtype=np.int64)


def _wrap(ring: Ring, arr: np.ndarray) -> Series:
    if not ring.exact:
        arr = np.mod(arr, ring.modulus)
    return Series(ring, arr, _trusted=True)


# -- ring operations --------------------------------------------------------


def add(a: Series, b: Series) -> Series:
    _check_ring(a, b)
    n = min(a.order, b.order)
    return _wrap(a.ring, a._c[:n] + b._c[:n])


def sub(a: Series, b: Series) -> Series:
    _check_ring(a, b)
    n = min(a.order, b.order)
    return _wrap(a.ring, a._c[:n] - b._c[:n])


def negate(a: Series) -> Series:
    return _wrap(a.ring, -a._c)


def scalar_mul(c: int, a: Series) -> Series:
    return _wrap(a.ring, a._c * a.ring.reduce(int(c)))


def mul(a: Series, b: Series) -> Series:
    _check_ring(a, b)
    n = min(a.order, b.order)
    return _wrap(a.ring, _convolve(a._c[:n], b._c[:n], n, a.ring))


def _convolve(x: np.ndarray, y: np.ndarray, n: int, ring: Ring) -> np.ndarray:
    """First ``n`` coefficients of ``x * y``."""
    if ring.exact:
        return _kronecker_mul(x, y, n)
    return _modular_mul(x, y, n, ring.modulus)


# Exact products go through one big-integer multiplication (Kronecker
# substitution): pack coefficients into fixed-width slots, multiply, unpack.


def _pack(values: Sequence[int], nbytes: int) -> int:
    return int.from_bytes(b"".join(v.to_bytes(nbytes, "little") for v in values), "little")


def _kronecker_mul(x: np.ndarray, y: np.ndarray, n: int) -> np.ndarray:
    xs = [int(v) for v in x]
    ys = [int(v) for v in y]
    # trailing zeros are free to drop and keep the integers small
    while xs and xs[-1] == 0:
        xs.pop()
    while ys and ys[-1] == 0:
        ys.pop()
    out = np.empty(n, dtype=object)
    out[:] = 0
    if not xs or not ys:
        return out
    bound = max(abs(v) for v in xs) * max(abs(v) for v in ys) * min(len(xs), len(ys))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * nbytes - 1)

    def signed_pack(vals):
        pos = _pack([v if v > 0 else 0 for v in vals], nbytes)
        neg = _pack([-v if v < 0 else 0 for v in vals], nbytes)
        return pos - neg

    prod = signed_pack(xs) * signed_pack(ys)
    slots = len(xs) + len(ys) - 1
    biased = prod + _pack([half] * slots, nbytes)
    raw = biased.to_bytes(slots * nbytes, "little")
    m = min(n, slots)
    out[:m] = [
        int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - half for i in range(m)
    ]
    return out


# float64 FFT convolution is exact while every true coefficient of the
# product stays well below 2**53; 2**40 leaves a wide rounding margin.
_FFT_SAFE = 1 << 40
_DIRECT_CUTOFF = 256


def _modular_mul(x: np.ndarray, y: np.ndarray, n: int, m: int) -> np.ndarray:
    if m >= 1 << 31:
        exact = _kronecker_mul(x.astype(object), y.astype(object), n)
        return np.array([int(v) % m for v in exact], dtype=np.int64)
    length = min(len(x), len(y))
    if length <= _DIRECT_CUTOFF and length * (m - 1) ** 2 < (1 << 62):
        return np.convolve(x, y)[:n] % m
    # split residues into limbs small enough for an exact float FFT
    limb_bits = 1
    while length * ((1 << (limb_bits + 1)) - 1) ** 2 < _FFT_SAFE and (1 << limb_bits) < m:
        limb_bits += 1
    base = 1 << limb_bits
    nlimbs = 1
    while base**nlimbs < m:
        nlimbs += 1
    xl = _limbs(x, base, nlimbs)
    yl = _limbs(y, base, nlimbs)
    size = 1 << (len(x) + len(y) - 1).bit_length()
    fx = [np.fft.rfft(v.astype(np.float64), size) for v in xl]
    fy = [np.fft.rfft(v.astype(np.float64), size) for v in yl]
    out = np.zeros(n, dtype=np.int64)
    for i in range(nlimbs):
        for j in range(nlimbs):
            part = np.rint(np.fft.irfft(fx[i] * fy[j], size)[:n]).astype(np.int64) % m
            scale = builtins.pow(base, i + j, m)
            out = (out + part * scale) % m
    return out


def _limbs(v: np.ndarray, base: int, count: int) -> list[np.ndarray]:
    out = []
    for _ in range(count):
        out.append(v % base)
        v = v // base
    return out


def invert_recurrence(a: Series) -> Series:
    """Inverse by the coefficient recurrence ``c0*b_n = -sum_{j>=1} a_j b_{n-j}``."""
    ring = a.ring
    c0 = int(a._c[0])
    u = ring.unit_inverse(c0)
    n = a.order
    ac = [int(v) for v in a._c]
    nz = [j for j in range(1, n) if ac[j]]
    b = [0] * n
    b[0] = ring.reduce(u)
    for k in range(1, n):
        s = 0
        for j in nz:
            if j > k:
                break
            s += ac[j] * b[k - j]
        b[k] = ring.reduce(-u * s)
    return Series(ring, b)


_NEWTON_CUTOFF = 128


def invert(a: Series) -> Series:
    """Multiplicative inverse to the full order of ``a``.

    Short series use the coefficient recurrence; longer ones use Newton
    iteration ``b <- b(2 - ab)``, which doubles the known prefix per step and
    works over any ring where the constant term is a unit.
    """
    ring = a.ring
    c0 = int(a._c[0])
    if not ring.is_unit(c0):
        raise NonUnitError(f"constant term {c0} is not a unit in {ring}")
    n = a.order
    if n <= _NEWTON_CUTOFF:
        return invert_recurrence(a)
    b = invert_recurrence(a.truncate(_NEWTON_CUTOFF))
    k = _NEWTON_CUTOFF
    while k < n:
        k = min(2 * k, n)
        ak = a.truncate(k)
        bk = Series(ring, _pad(b._c, k, ring), _trusted=True)
        e = mul(ak, bk)
        two_minus = _wrap(ring, -e._c)
        two_minus = _wrap(ring, two_minus._c + _unit_vector(k, ring, 2))
        b = mul(bk, two_minus)
    return b


def _pad(arr: np.ndarray, k: int, ring: Ring) -> np.ndarray:
    out = _zeros(k, ring)
    out[: len(arr)] = arr[:k]
    return out


def _unit_vector(k: int, ring: Ring, c: int) -> np.ndarray:
    out = _zeros(k, ring)
    out[0] = c
    return out


def pow(a: Series, e: int) -> Series:
    if e < 0:
        return pow(invert(a), -e)
    result = one(a.order, a.ring)
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


# -- substitutions and dissections -----------------------------------------


def substitute_power(a: Series, k: int, order: int | None = None) -> Series:
    """``a(q^k)``.

    Known coefficients of ``a`` up to index ``N-1`` determine the result up to
    index ``k(N-1)``, so the natural order is ``k(N-1)+1``.  Passing ``order``
    truncates further.
    """
    if k < 1:
        raise ValueError(f"substitution exponent must be >= 1, got {k}")
    natural = k * (a.order - 1) + 1
    if order is None:
        order = natural
    elif order > natural:
        raise ValueError(f"a(q^{k}) is only known to order {natural}, asked for {order}")
    out = _zeros(order, a.ring)
    src = a._c[: (order - 1) // k + 1]
    out[::k] = src
    return Series(a.ring, out, _trusted=True)


def substitute_neg(a: Series) -> Series:
    """``a(-q)``."""
    c = a._c.copy()
    c[1::2] = -c[1::2]
    return _wrap(a.ring, c)


def mul_qpower(a: Series, j: int) -> Series:
    if j < 0:
        raise ValueError("q-shift must be nonnegative")
    if j == 0:
        return a
    out = _zeros(a.order + j, a.ring)
    out[j:] = a._c
    return Series(a.ring, out, _trusted=True)


def extract_dissection(a: Series, m: int, r: int) -> Series:
    """Series whose n-th coefficient is the ``(mn+r)``-th coefficient of ``a``."""
    if m < 1:
        raise ValueError("dissection modulus must be >= 1")
    if not 0 <= r < m:
        raise ValueError(f"residue {r} is not in [0, {m})")
    if a.order <= r:
        raise ValueError(f"no coefficient of class {r} mod {m} is known below order {a.order}")
    return Series(a.ring, a._c[r::m].copy(), _trusted=True)


def reduce_mod(a: Series, m: int) -> Series:
    if a.ring.exact:
        c = np.array([int(v) % m for v in a._c], dtype=np.int64)
        return Series(Modular(m), c, _trusted=True)
    if a.ring.modulus % m:
        raise RingMismatchError(f"cannot reduce {a.ring} modulo {m}")
    return Series(Modular(m), a._c % m, _trusted=True)
