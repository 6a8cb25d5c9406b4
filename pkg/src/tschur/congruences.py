"""Checking congruences for the counting functions on finite prefixes.

All residue checks run in a modular ring end to end.  Family series are
shared through a lock-protected cache that keeps, per family and modulus,
the deepest expansion computed so far.
"""

from __future__ import annotations

import itertools
import math
import threading
import time

import numpy as np

from .expr import Evaluator, ExpressionError
from .families import TSCHUR_OVER, TSCHUR_OVER_TUPLE, FamilySpec, family_gf
from .manifest import CongruenceClaim, Expr, LegendreEquals, PrimeFamilyClaim, ResidueClass
from .report import (
    CONFIG_ERROR,
    COUNTEREXAMPLE,
    ORDER_TOO_SMALL,
    VERIFIED,
    VerificationReport,
)
from .series import EXACT, Modular, Ring, Series, reduce_mod
from .special import _is_prime

MAX_ORDER = 1_000_000


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    if p < 3 or not _is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def satisfies(p: int, cond) -> bool:
    if isinstance(cond, LegendreEquals):
        return legendre(cond.a, p) == cond.value
    if isinstance(cond, ResidueClass):
        return p % cond.d == cond.c % cond.d
    raise TypeError(f"unknown prime condition {cond!r}")


def qualifying_primes(conditions, count: int, p_min: int = 5) -> list[int]:
    """The ``count`` smallest primes >= p_min meeting every condition."""
    out = []
    p = max(p_min, 3)
    while len(out) < count:
        if _is_prime(p) and all(satisfies(p, c) for c in conditions):
            out.append(p)
        p += 1
        if p > 10_000:
            raise ValueError(f"fewer than {count} primes below 10000 satisfy {conditions}")
    return out


# -- family series cache ----------------------------------------------------


class FamilyCache:
    """Family expansions keyed by (family, ring); grows on demand."""

    def __init__(self):
        self._lock = threading.Lock()
        self._series: dict[tuple[FamilySpec, Ring], Series] = {}

    def get(self, spec: FamilySpec, order: int, ring: Ring) -> Series:
        with self._lock:
            hit = self._series.get((spec, ring))
            if hit is not None and hit.order >= order:
                return hit.truncate(order)
            s = family_gf(spec, order, ring)
            self._series[(spec, ring)] = s
            return s

    def warm(self, requests) -> None:
        """Expand each family once at the deepest requested order.

        Requests for several moduli of one family share a single expansion
        modulo their lcm when that stays in single-word range.
        """
        plan: dict[FamilySpec, dict] = {}
        for spec, ring, order in requests:
            entry = plan.setdefault(spec, {})
            entry[ring] = max(order, entry.get(ring, 0))
        for spec, wants in plan.items():
            moduli = [r.modulus for r in wants if not r.exact]
            lcm = math.lcm(*moduli) if moduli else None
            if lcm is not None and len(moduli) > 1 and lcm < 2**31:
                base = self.get(spec, max(o for r, o in wants.items() if not r.exact), Modular(lcm))
                with self._lock:
                    for ring, order in wants.items():
                        if ring.exact:
                            continue
                        cur = self._series.get((spec, ring))
                        if cur is None or cur.order < order:
                            self._series[(spec, ring)] = reduce_mod(base, ring.modulus)
                for ring, order in wants.items():
                    if ring.exact:
                        self.get(spec, order, ring)
            else:
                for ring, order in wants.items():
                    self.get(spec, order, ring)

    def clear(self):
        with self._lock:
            self._series.clear()


DEFAULT_CACHE = FamilyCache()


def resolve_family(expr: Expr, env: dict) -> FamilySpec:
    ev = Evaluator(EXACT, env)
    args = expr.node.args
    spec = FamilySpec(args[0].name, *(ev.integer(a) for a in args[1:]))
    if spec.family == TSCHUR_OVER_TUPLE and spec.r == 1:
        return FamilySpec(TSCHUR_OVER, spec.t)
    return spec


def _grid(params: dict, env: dict, alpha_max: int):
    ranges = dict(params)
    if "alpha" not in ranges:
        ranges["alpha"] = range(0, alpha_max + 1)
    names = list(ranges)
    for values in itertools.product(*(ranges[k] for k in names)):
        yield {**env, **dict(zip(names, values))}


# -- progressions -------------------------------------------------------------


class _Side:
    """One side of a progression check: family and index = scale*(A n + B)."""

    def __init__(self, spec: FamilySpec, A: int, B: int, scale: int, coef: int):
        self.spec, self.A, self.B, self.scale, self.coef = spec, A, B, scale, coef

    def indices(self, n_max: int) -> np.ndarray:
        return self.scale * (self.A * np.arange(n_max + 1, dtype=np.int64) + self.B)

    def top(self, n_max: int) -> int:
        return self.scale * (self.A * n_max + self.B)


def _progression_cases(claim: CongruenceClaim):
    """Yield (env, lhs _Side, rhs _Side or None) for every parameter assignment."""
    for env in _grid(claim.params, claim.env, claim.alpha_max):
        ev = Evaluator(EXACT, env)
        val = lambda e, default: ev.integer(e.node) if e is not None else default  # noqa: E731
        A = ev.integer(claim.A.node)
        B = val(claim.B, 0)
        if A < 1 or B < 0:
            raise ValueError(f"progression needs A >= 1 and B >= 0, got A={A}, B={B}")
        lhs = _Side(resolve_family(claim.family, env), A, B, val(claim.scale, 1), 1)
        if claim.type == "vanishing":
            yield env, lhs, None
            continue
        rfam = resolve_family(claim.rhs_family, env) if claim.rhs_family is not None else lhs.spec
        coef = val(claim.sign, 1) * val(claim.factor, 1)
        rhs = _Side(rfam, val(claim.rhs_A, A), val(claim.rhs_B, B), val(claim.rhs_scale, 1), coef)
        yield env, lhs, rhs


def _params_of(env: dict, claim) -> dict:
    return {k: v for k, v in env.items() if k not in claim.env}


def progression_requests(claim: CongruenceClaim, n_max: int | None = None):
    n_max = claim.n_max if n_max is None else n_max
    need: dict[FamilySpec, int] = {}
    for _, lhs, rhs in _progression_cases(claim):
        for side in (lhs, rhs) if rhs is not None else (lhs,):
            need[side.spec] = max(need.get(side.spec, 0), side.top(n_max) + 1)
    return [(spec, claim.ring, order) for spec, order in need.items()]


def check_progression(
    claim: CongruenceClaim,
    *,
    n_max: int | None = None,
    cache: FamilyCache | None = None,
    max_order: int = MAX_ORDER,
) -> VerificationReport:
    """Check a vanishing, relation or exact-equality claim for n <= n_max."""
    start = time.perf_counter()
    cache = cache or DEFAULT_CACHE
    n_max = claim.n_max if n_max is None else n_max
    ring = claim.ring
    m = ring.modulus

    def done(status, order, detail):
        return VerificationReport(claim.id, status, order, detail, (time.perf_counter() - start) * 1e3, str(ring))

    try:
        cases = list(_progression_cases(claim))
    except (ValueError, ExpressionError) as exc:
        return done(CONFIG_ERROR, None, {"message": str(exc)})
    needed = max(s.top(n_max) + 1 for _, l, r in cases for s in ((l, r) if r else (l,)))
    if needed > max_order:
        return done(ORDER_TOO_SMALL, None, {"needed": needed, "had": max_order})
    checked = 0
    for env, lhs, rhs in cases:
        a = cache.get(lhs.spec, lhs.top(n_max) + 1, ring).array
        li = lhs.indices(n_max)
        lv = a[li]
        if rhs is None:
            diff = lv
            rv = None
        else:
            b = cache.get(rhs.spec, rhs.top(n_max) + 1, ring).array
            ri = rhs.indices(n_max)
            rv = b[ri]
            diff = lv - rhs.coef * rv
        bad = np.nonzero(diff % m)[0] if m else np.nonzero(diff != 0)[0]
        checked += n_max + 1
        if len(bad):
            n = int(bad[0])
            detail = {"n": n, "params": _params_of(env, claim), "index": int(li[n]), "lhs": int(lv[n])}
            if rhs is not None:
                detail.update({"rhs_index": int(rhs.indices(n_max)[n]), "rhs": int(rv[n]), "rhs_coefficient": rhs.coef})
            return done(COUNTEREXAMPLE, needed, detail)
    return done(VERIFIED, needed, {"n_max": n_max, "cases": len(cases), "checked": checked})


# -- prime families -----------------------------------------------------------


def claim_primes(claim: PrimeFamilyClaim) -> list[int]:
    """The claim's prime list; raises ValueError if a listed prime fails its gate."""
    if claim.primes is None:
        return qualifying_primes(claim.conditions, claim.auto_primes, claim.p_min)
    for p in claim.primes:
        if p < claim.p_min or not _is_prime(p):
            raise ValueError(f"{p} is not a prime >= {claim.p_min}")
        for c in claim.conditions:
            if not satisfies(p, c):
                raise ValueError(f"p={p} violates the side condition {c}")
    return list(claim.primes)


def _prime_cases(claim: PrimeFamilyClaim, primes, n_max: int):
    """Yield (p, env, family, index array over n) for every (p, params, alpha, i)."""
    for p in primes:
        for env in _grid(claim.params, {**claim.env, "p": p}, claim.alpha_max):
            spec = resolve_family(claim.family, env)
            for i in range(1, p):
                ev = Evaluator(EXACT, {**env, "i": i})

                def at(n):
                    ev.env["n"] = n
                    return ev.integer(claim.arg.node)

                base = at(0)
                if n_max == 0:
                    idx = np.array([base], dtype=np.int64)
                else:
                    step = at(1) - base
                    idx = base + step * np.arange(n_max + 1, dtype=np.int64)
                    if at(n_max) != int(idx[-1]):
                        idx = np.array([at(n) for n in range(n_max + 1)], dtype=np.int64)
                if idx.min() < 0:
                    raise ValueError(f"negative argument {int(idx.min())} at p={p}, i={i}")
                yield p, {**env, "i": i}, spec, idx


def prime_family_requests(claim: PrimeFamilyClaim, n_max: int | None = None):
    n_max = claim.n_max if n_max is None else n_max
    need: dict[FamilySpec, int] = {}
    for _, _, spec, idx in _prime_cases(claim, claim_primes(claim), n_max):
        need[spec] = max(need.get(spec, 0), int(idx.max()) + 1)
    return [(spec, claim.ring, order) for spec, order in need.items()]


def check_prime_family(
    claim: PrimeFamilyClaim,
    *,
    n_max: int | None = None,
    cache: FamilyCache | None = None,
    max_order: int = MAX_ORDER,
) -> VerificationReport:
    """Check a prime-parameterized family for each gated prime, alpha, i and n."""
    start = time.perf_counter()
    cache = cache or DEFAULT_CACHE
    n_max = claim.n_max if n_max is None else n_max
    ring = claim.ring
    m = claim.modulus

    def done(status, order, detail):
        return VerificationReport(claim.id, status, order, detail, (time.perf_counter() - start) * 1e3, str(ring))

    try:
        primes = claim_primes(claim)
        cases = list(_prime_cases(claim, primes, n_max))
    except (ValueError, ExpressionError) as exc:
        return done(CONFIG_ERROR, None, {"message": str(exc)})
    needed = max(int(idx.max()) + 1 for *_, idx in cases)
    if needed > max_order:
        return done(ORDER_TOO_SMALL, None, {"needed": needed, "had": max_order})
    per_prime = {
        p: {
            "p": p,
            "gate": [str(c) for c in claim.conditions],
            "legendre": {str(a): legendre(a, p) for a in claim.also_legendre},
            "alpha_max": claim.alpha_max,
            "max_index": 0,
            "checked": 0,
        }
        for p in primes
    }
    for p, env, spec, idx in cases:
        a = cache.get(spec, int(idx.max()) + 1, ring).array
        vals = a[idx] % m
        bad = np.nonzero(vals)[0]
        rec = per_prime[p]
        rec["checked"] += len(idx)
        rec["max_index"] = max(rec["max_index"], int(idx.max()))
        if len(bad):
            n = int(bad[0])
            detail = {
                "p": p,
                "n": n,
                "params": {k: v for k, v in env.items() if k not in claim.env},
                "index": int(idx[n]),
                "residue": int(vals[n]),
                "primes": list(per_prime.values()),
            }
            return done(COUNTEREXAMPLE, needed, detail)
    return done(VERIFIED, needed, {"n_max": n_max, "primes": list(per_prime.values())})


# -- exploratory scan ---------------------------------------------------------


def scan_progressions(spec: FamilySpec, A: int, m: int, n_max: int, cache: FamilyCache | None = None) -> list[int]:
    """Residues B < A with coefficient(A n + B) = 0 mod m for all n <= n_max.

    The output is conjectural: it is evidence on a prefix, never a proof.
    """
    if A < 1 or m < 1 or n_max < 0:
        raise ValueError("need A >= 1, m >= 1 and n_max >= 0")
    if m == 1:
        return list(range(A))
    cache = cache or DEFAULT_CACHE
    arr = cache.get(spec, A * (n_max + 1), Modular(m)).array.reshape(n_max + 1, A)
    return [B for B in range(A) if not arr[:, B].any()]


# -- exact cross-check --------------------------------------------------------


def exact_recheck(claim, count: int = 20) -> VerificationReport:
    """Re-run a claim on its first ``count`` indices with exact coefficients reduced afterwards."""
    exact_cache = _ExactThenReduce(claim.ring)
    if isinstance(claim, PrimeFamilyClaim):
        return check_prime_family(claim, n_max=count - 1, cache=exact_cache)
    return check_progression(claim, n_max=count - 1, cache=exact_cache)


class _ExactThenReduce(FamilyCache):
    """A cache that expands over the integers and reduces on the way out."""

    def __init__(self, ring: Ring):
        super().__init__()
        self.target = ring

    def get(self, spec, order, ring):
        s = super().get(spec, order, EXACT)
        return s if ring.exact else reduce_mod(s, ring.modulus)


def run_claim(claim, **kwargs) -> VerificationReport:
    if isinstance(claim, PrimeFamilyClaim):
        return check_prime_family(claim, **kwargs)
    if isinstance(claim, CongruenceClaim):
        return check_progression(claim, **kwargs)
    raise TypeError(f"not a congruence claim: {claim.kind}")


def requests(claim, n_max: int | None = None):
    try:
        if isinstance(claim, PrimeFamilyClaim):
            return prime_family_requests(claim, n_max)
        return progression_requests(claim, n_max)
    except (ValueError, ExpressionError):
        return []

