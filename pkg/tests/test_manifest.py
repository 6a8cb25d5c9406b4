import pytest

from tschur.expr import parse_expression, to_text
from tschur.manifest import (
    SHIPPED,
    CongruenceClaim,
    DissectionClaim,
    IdentityClaim,
    LegendreEquals,
    ManifestError,
    PrimeFamilyClaim,
    ResidueClass,
    default_order,
    register_manifest,
    shipped_claims,
    shipped_manifest_text,
)
from tschur.series import EXACT, Modular

IDENTITY = """\
# a comment line
id: psi-3
kind: identity
cite: psi 3-dissection
lhs: psi
rhs: f6*f9^2/(f3*f18)
  + q*f18^2/f9
order: 120
"""


def test_empty_manifest_is_empty():
    assert register_manifest("") == []
    assert register_manifest("\n# nothing here\n") == []


def test_identity_stanza():
    (claim,) = register_manifest(IDENTITY)
    assert isinstance(claim, IdentityClaim)
    assert claim.id == "psi-3" and claim.order == 120 and claim.ring == EXACT
    assert claim.rhs.text == "f6*f9^2/(f3*f18) + q*f18^2/f9"
    assert claim.line == 2


def test_dissection_stanza_with_let_and_ring():
    text = "id: d\nkind: dissection\nlet: l=3\nring: mod 32\nsource: gf(tschur-over, 3*l)\nm: 3\nr: 2\nresult: f(l)\n"
    (claim,) = register_manifest(text)
    assert isinstance(claim, DissectionClaim)
    assert claim.env == {"l": 3} and (claim.m, claim.r) == (3, 2) and claim.ring == Modular(32)


def test_dissection_residue_out_of_range():
    with pytest.raises(ManifestError):
        register_manifest("id: d\nkind: dissection\nsource: f1\nm: 3\nr: 3\nresult: f1\n")


def test_congruence_stanza():
    text = (
        "id: c\nkind: congruence\nfamily: tschur-over(9)\nparams: j=1..5, beta=1..2\n"
        "A: 96\nB: 12*j+12\nmod: 4\nn-max: 10\nalpha-max: 2\n"
    )
    (claim,) = register_manifest(text)
    assert isinstance(claim, CongruenceClaim)
    assert claim.params == {"j": range(1, 6), "beta": range(1, 3)}
    assert claim.modulus == 4 and claim.n_max == 10 and claim.alpha_max == 2
    assert claim.family.text == "gf(tschur-over, 9)"
    assert claim.ring == Modular(4)


def test_congruence_defaults():
    (claim,) = register_manifest("id: c\nkind: congruence\nfamily: tschur-over(3)\nA: 2\nB: 0\nmod: 4\n")
    assert claim.n_max == 200


def test_prime_family_stanza():
    text = (
        "id: pf\nkind: prime-family\nfamily: tschur-over(3)\nmod: 12\n"
        "condition: p = 5 mod 6 and legendre(-3) = -1\nalso-legendre: -12\n"
        "arg: 6*p^(2*alpha+2)*n + (6*i+p)*p^(2*alpha+1)\nprimes: auto(3)\n"
    )
    (claim,) = register_manifest(text)
    assert isinstance(claim, PrimeFamilyClaim)
    assert claim.conditions == (ResidueClass(5, 6), LegendreEquals(-3, -1))
    assert claim.auto_primes == 3 and claim.n_max == 50


def test_prime_family_explicit_primes():
    text = "id: pf\nkind: prime-family\nfamily: tschur-over(9)\nmod: 3\ncondition: legendre(-3) = -1\narg: n\nprimes: 5, 11\n"
    (claim,) = register_manifest(text)
    assert claim.primes == (5, 11)


def test_malformed_expression_reports_line_and_column():
    text = "id: bad\nkind: identity\nlhs: f1\nrhs: f2^3/(f1*\n"
    with pytest.raises(ManifestError) as exc:
        register_manifest(text)
    assert exc.value.line == 4
    assert exc.value.col is not None and exc.value.col > 5


def test_error_on_continuation_line_points_there():
    text = "id: bad\nkind: identity\nlhs: f1\nrhs: f1\n  + f0\n"
    with pytest.raises(ManifestError) as exc:
        register_manifest(text)
    assert exc.value.line == 5


@pytest.mark.parametrize(
    "text",
    [
        "id: a\nkind: identity\nlhs: f1\nrhs: f1\n\nid: a\nkind: identity\nlhs: f1\nrhs: f1\n",
        "id: a\nid: b\nkind: identity\nlhs: f1\nrhs: f1\n",
        "id: a\nkind: magic\nlhs: f1\nrhs: f1\n",
        "id: a\nkind: identity\nlhs: f1\n",
        "id: a\nkind: identity\nlhs: f1\nrhs: f1\nm: 3\n",
        "  continuation first\n",
        "no colon here\n",
        "id: a\nkind: identity\nlhs: f1\nrhs: f1\nring: mod x\n",
        "id: a\nkind: identity\nlhs: f1\nrhs: f1\norder: many\n",
        "id: c\nkind: congruence\nfamily: f1\nA: 2\nB: 0\nmod: 4\n",
        "id: c\nkind: congruence\nfamily: tschur-over(3)\nA: 2\nB: 0\nmod: 4\nparams: j=1..\n",
        "id: pf\nkind: prime-family\nfamily: tschur-over(3)\nmod: 3\ncondition: p prime\narg: n\n",
    ],
)
def test_rejected_manifests(text):
    with pytest.raises(ManifestError):
        register_manifest(text)


def test_register_from_path(tmp_path):
    path = tmp_path / "one.manifest"
    path.write_text(IDENTITY, encoding="utf-8")
    assert [c.id for c in register_manifest(path)] == ["psi-3"]
    assert [c.id for c in register_manifest(str(path))] == ["psi-3"]


def test_shipped_manifest_size():
    claims = shipped_claims()
    assert len(claims) >= 35
    kinds = {c.kind for c in claims}
    assert kinds == {"identity", "dissection", "congruence", "prime-family"}


def test_shipped_ids_unique_across_both_files():
    ids = [c.id for name in SHIPPED for c in shipped_claims(name)]
    assert len(ids) == len(set(ids))


def _expressions(claim):
    for attr in ("lhs", "rhs", "source", "result", "family", "A", "B", "rhs_family", "rhs_A", "rhs_B", "arg", "scale", "rhs_scale", "sign", "factor"):
        value = getattr(claim, attr, None)
        if value is not None and hasattr(value, "node"):
            yield value


@pytest.mark.parametrize("name", SHIPPED)
def test_parser_round_trip_over_shipped_manifests(name):
    count = 0
    for claim in shipped_claims(name):
        for expr in _expressions(claim):
            assert parse_expression(to_text(expr.node)) == expr.node, (claim.id, expr.text)
            count += 1
    assert count > 0


def test_errata_claims_name_their_corrections():
    main = {c.id for c in shipped_claims()}
    for claim in shipped_claims("errata.manifest"):
        named = [w.rstrip(".,;)") for w in claim.note.split() if w.rstrip(".,;)") in main]
        assert named, claim.id


def test_default_order_env(monkeypatch):
    monkeypatch.delenv("QSERIES_DEFAULT_ORDER", raising=False)
    assert default_order() == 400
    monkeypatch.setenv("QSERIES_DEFAULT_ORDER", "123")
    assert default_order() == 123


def test_shipped_text_is_readable():
    assert "kind: prime-family" in shipped_manifest_text()
