"""A verifier is only useful if it rejects wrong statements: break a claim on purpose."""

from tschur import run_claims, shipped_claims
from tschur.identities import mutate, perturb, summand_count

claim = {c.id: c for c in shipped_claims()}["psi-3diss"]
print("original      ", run_claims([claim])[0].status)
for which in range(summand_count(claim)):
    (r,) = run_claims([mutate(claim, which)])
    print(f"flip term {which}   ", r.status, r.detail)

# modulo 32 a term 16*x equals -16*x, so a sign flip can be invisible;
# adding a stray q^k is always caught
mod32 = {c.id: c for c in shipped_claims()}["s9-12n11-mod32"]
print("mod 32 flip   ", run_claims([mutate(mod32)])[0].status)
print("mod 32 +q^3   ", run_claims([perturb(mod32, 3)])[0].status)
