"""Run a list of claims, optionally in parallel, reporting in manifest order."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from . import congruences, identities
from .manifest import Claim, CongruenceClaim, PrimeFamilyClaim
from .report import VerificationReport


def run_one(claim: Claim, order: int | None = None, cache=None) -> VerificationReport:
    if isinstance(claim, (CongruenceClaim, PrimeFamilyClaim)):
        return congruences.run_claim(claim, cache=cache or congruences.DEFAULT_CACHE)
    return identities.run_claim(claim, order)


def run_claims(claims: list[Claim], order: int | None = None, jobs: int = 1, cache=None) -> list[VerificationReport]:
    """Verify every claim; ``order`` overrides identity orders globally.

    Family expansions needed by congruence claims are computed once, at the
    deepest order any claim asks for, before the claims themselves run.
    """
    cache = cache or congruences.DEFAULT_CACHE
    wanted = [r for c in claims if isinstance(c, (CongruenceClaim, PrimeFamilyClaim)) for r in congruences.requests(c)]
    cache.warm(wanted)
    if jobs <= 1:
        return [run_one(c, order, cache) for c in claims]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda c: run_one(c, order, cache), claims))
