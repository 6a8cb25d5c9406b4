"""Run shipped claims, then show what a false variant looks like."""

from tschur import run_claims, shipped_claims

main = {c.id: c for c in shipped_claims()}
for cid in ("psi-3diss", "s3-12n7", "s9-24n23", "s9-pf-mod3-leg-3"):
    (r,) = run_claims([main[cid]])
    print(f"{r.claim_id:22} {r.status:15} order={r.order} ring={r.ring}")

print()
print("printed variants that do not hold:")
for r in run_claims(shipped_claims("errata.manifest")):
    print(f"  {r.claim_id:34} {r.status} at q^{r.detail.get('index')}")
