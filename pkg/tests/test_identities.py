import dataclasses

import pytest

from tschur.expr import parse_expression
from tschur.identities import flip_sign, mutate, perturb, run_claim, summand_count, verify_dissection, verify_identity
from tschur.manifest import DissectionClaim, IdentityClaim, register_manifest, shipped_claims
from tschur.report import COUNTEREXAMPLE, ILL_FORMED, VERIFIED
from tschur.series import add, extract_dissection, make_series, mul_qpower, substitute_power
from tschur.families import FamilySpec, family_gf

MAIN = {c.id: c for c in shipped_claims()}
ERRATA = {c.id: c for c in shipped_claims("errata.manifest")}
IDENTITY_LIKE = [c for c in MAIN.values() if isinstance(c, (IdentityClaim, DissectionClaim))]


def one(text):
    (claim,) = register_manifest(text)
    return claim


def test_f3cube_over_f1_at_order_500():
    r = verify_identity(MAIN["f3cube-over-f1-2diss"], 500)
    assert r.status == VERIFIED and r.order == 500


def test_psi_three_dissection_at_order_500():
    assert verify_identity(MAIN["psi-3diss"], 500).ok


def test_theorem_class_two_ell_one_at_order_400():
    assert verify_dissection(MAIN["s3l-3n2-l1"], 400).ok


def test_s9_6n1_at_order_400():
    r = verify_dissection(MAIN["s9-6n1"], 400)
    assert r.ok and r.ring == "ZZ"


def test_trivial_dissection():
    claim = one("id: t\nkind: dissection\nsource: gf(tschur-over, 9)\nm: 1\nr: 0\nresult: gf(tschur-over, 9)\n")
    assert verify_dissection(claim, 100).ok


def test_counterexample_reports_index_and_values():
    claim = one("id: t\nkind: identity\nlhs: f1\nrhs: f1 + 5*q^3\n")
    r = verify_identity(claim, 50)
    assert r.status == COUNTEREXAMPLE
    assert r.detail == {"index": 3, "lhs": 0, "rhs": 5}


def test_counterexample_is_reproducible():
    claim = ERRATA["inv-f1sq-f3sq-2diss"]
    first, second = verify_identity(claim, 100), verify_identity(claim, 100)
    assert first.detail == second.detail == {"index": 20, "lhs": 67948, "rhs": 67940}


def test_non_unit_denominator_is_ill_formed():
    r = verify_identity(one("id: t\nkind: identity\nlhs: f1\nrhs: 1/(2*f1)\n"), 20)
    assert r.status == ILL_FORMED and not r.ok
    r = verify_identity(one("id: t\nkind: identity\nlhs: f1\nrhs: 1/(q*f1)\n"), 20)
    assert r.status == ILL_FORMED


def test_unbound_variable_is_ill_formed():
    assert verify_identity(one("id: t\nkind: identity\nlhs: f1\nrhs: f(l)\n"), 20).status == ILL_FORMED


def test_claim_order_then_default_order(monkeypatch):
    claim = one("id: t\nkind: identity\nlhs: f1\nrhs: f1\norder: 77\n")
    assert verify_identity(claim).order == 77
    monkeypatch.setenv("QSERIES_DEFAULT_ORDER", "55")
    claim = one("id: t\nkind: identity\nlhs: f1\nrhs: f1\n")
    assert verify_identity(claim).order == 55
    assert verify_identity(claim, 30).order == 30


def test_modular_identity_claim():
    claim = one("id: t\nkind: dissection\nring: mod 32\nsource: gf(tschur-over, 9)\nm: 12\nr: 11\nresult: 16*f4*f6^3\n")
    r = verify_dissection(claim, 300)
    assert r.ok and r.ring == "ZZ/32"


def test_lemma_exact_formulas_hold_exactly():
    for cid in ("s3-12n7", "s3-12n11"):
        assert run_claim(MAIN[cid], 300).ok
    assert run_claim(MAIN["s3-12n7-mod32"], 300).ok


def test_theorem_classes_reassemble():
    for l in (1, 3, 5):
        src = family_gf(FamilySpec("tschur-over", 3 * l), 301)
        total = make_series(src.ring, [0] * 301)
        for r in range(3):
            piece = mul_qpower(substitute_power(extract_dissection(src, 3, r), 3), r)
            padded = piece.coeffs()[:301] + [0] * max(0, 301 - piece.order)
            total = add(total, make_series(src.ring, padded))
        assert total == src


# -- mutation soundness ---------------------------------------------------------


def test_flip_sign_targets_one_summand():
    node = parse_expression("a - b + c")
    assert flip_sign(node, 0) == parse_expression("-a - b + c")
    assert flip_sign(node, 1) == parse_expression("a + b + c")
    assert flip_sign(node, 2) == parse_expression("a - b - c")
    assert flip_sign(parse_expression("a*b"), 0) == parse_expression("-(a*b)")


@pytest.mark.parametrize("claim", [c for c in IDENTITY_LIKE if c.ring.exact], ids=lambda c: c.id)
def test_every_sign_flip_is_caught(claim):
    for which in range(summand_count(claim)):
        assert run_claim(mutate(claim, which), 150).status == COUNTEREXAMPLE


@pytest.mark.parametrize("claim", IDENTITY_LIKE, ids=lambda c: c.id)
def test_every_coefficient_perturbation_is_caught(claim):
    r = run_claim(perturb(claim, 2), 150)
    assert r.status == COUNTEREXAMPLE and r.detail["index"] == 2


def test_sign_flip_invisible_when_twice_the_term_vanishes():
    # documents why the perturbation above exists: 16x = -16x modulo 32
    claim = MAIN["s9-12n11-mod32"]
    assert run_claim(mutate(claim), 150).ok


def test_mutate_leaves_original_untouched():
    claim = MAIN["f1sq-2diss"]
    before = dataclasses.replace(claim)
    mutate(claim, 1)
    assert claim == before
