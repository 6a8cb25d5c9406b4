"""Arithmetic progressions, prime-indexed families, and a conjectural scan."""

from tschur import legendre, scan_progressions, shipped_claims
from tschur.congruences import check_prime_family, qualifying_primes
from tschur.families import FamilySpec

s9 = FamilySpec("tschur-over", 9)

# which residues B make S9bar(24n+B) vanish mod 32 for every n <= 200?
print("24n+B mod 32 candidates:", scan_progressions(s9, 24, 32, 200))
print("(candidates are conjectural: only a finite prefix was inspected)")

claim = {c.id: c for c in shipped_claims()}["s9-pf-mod3-leg-3"]
print("primes with (-3/p) = -1:", qualifying_primes(claim.conditions, 4))
print("(-3/5) =", legendre(-3, 5))
r = check_prime_family(claim)
for rec in r.detail["primes"]:
    print(f"  p={rec['p']}: {rec['checked']} coefficients checked, deepest index {rec['max_index']}")
print(r.status)
