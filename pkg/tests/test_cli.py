import io
import json
import re
import subprocess
import sys

import pytest

from tschur.cli import main
from tschur.manifest import shipped_manifest_text


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def tsv_rows(text):
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    header = lines[0].split("\t")
    return [dict(zip(header, l.split("\t"))) for l in lines[1:]]


def strip_runtimes(text):
    return re.sub(r'"runtime_ms": [0-9.e+-]+', '"runtime_ms": 0', text)


def test_expand_overpartitions():
    code, out = run("expand", "gf(overpartition)", "--order", "6")
    assert code == 0
    assert [int(r["coefficient"]) for r in tsv_rows(out)] == [1, 2, 4, 8, 14, 24]


def test_expand_json_tschur_over_5():
    code, out = run("--format", "json", "expand", "gf(tschur-over,5)", "--order", "7")
    doc = json.loads(out)
    assert code == 0 and doc["order"] == 7
    assert doc["rows"][6] == {"n": 6, "coefficient": 8}


def test_expand_constant():
    code, out = run("expand", "1", "--order", "5")
    assert [int(r["coefficient"]) for r in tsv_rows(out)] == [1, 0, 0, 0, 0]


def test_expand_ring_flag_before_or_after_subcommand():
    _, before = run("--ring", "mod 3", "expand", "f1", "--order", "5")
    _, after = run("expand", "f1", "--order", "5", "--ring", "mod 3")
    assert before == after
    assert [int(r["coefficient"]) for r in tsv_rows(after)] == [1, 2, 2, 0, 0]


def test_expand_let_binding():
    _, a = run("expand", "f(2*l)", "--let", "l=3", "--order", "10")
    _, b = run("expand", "f6", "--order", "10")
    assert tsv_rows(a) == tsv_rows(b)


def test_expand_default_order_from_env(monkeypatch):
    monkeypatch.setenv("QSERIES_DEFAULT_ORDER", "12")
    _, out = run("expand", "f1")
    assert len(tsv_rows(out)) == 12


def test_expand_bad_expression_is_usage_error(capsys):
    code, _ = run("expand", "f0^2")
    assert code == 2
    assert "positive" in capsys.readouterr().err


def test_verify_single_claim_filter():
    code, out = run("--format", "json", "verify", "--filter", "id=s9-24n23")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == "1"
    assert [c["id"] for c in doc["claims"]] == ["s9-24n23"]
    assert set(doc["claims"][0]) >= {"id", "status", "order", "detail", "runtime_ms"}


def test_verify_mutated_manifest_fails(tmp_path):
    text = "id: mutated\nkind: identity\nlhs: psi\nrhs: f6*f9^2/(f3*f18) - q*f18^2/f9\n"
    path = tmp_path / "m.manifest"
    path.write_text(text, encoding="utf-8")
    code, out = run("--format", "json", "verify", str(path))
    doc = json.loads(out)
    assert code == 1
    assert doc["claims"][0]["status"] == "counterexample"


def test_verify_errata_exits_nonzero():
    code, out = run("verify", "shipped:errata.manifest", "--filter", "id=s9-2n1")
    assert code == 1
    assert tsv_rows("id\tstatus\torder\tring\tdetail\n" + out)[0]["status"] == "counterexample"


def test_verify_writes_report_file(tmp_path):
    report = tmp_path / "r.json"
    code, _ = run("verify", "--filter", "id=psi-3diss", "--report", str(report))
    assert code == 0
    assert json.loads(report.read_text())["claims"][0]["status"] == "verified"


def test_verify_order_override_applies_to_identities():
    _, out = run("--format", "json", "--order", "90", "verify", "--filter", "id=psi-3diss")
    assert json.loads(out)["claims"][0]["order"] == 90


def test_verify_reports_are_deterministic():
    args = ("--format", "json", "verify", "--filter", "id=s3-*")
    _, first = run(*args)
    _, second = run("--jobs", "4", *args)
    assert strip_runtimes(first) == strip_runtimes(second)
    assert len(json.loads(first)["claims"]) > 30


def test_verify_rejects_bad_filter_and_empty_selection():
    assert run("verify", "--filter", "colour=red")[0] == 2
    assert run("verify", "--filter", "id=no-such-claim")[0] == 2


def test_verify_malformed_manifest_is_usage_error(tmp_path, capsys):
    path = tmp_path / "bad.manifest"
    path.write_text("id: x\nkind: identity\nlhs: f1\nrhs: f1 +\n", encoding="utf-8")
    assert run("verify", str(path))[0] == 2
    assert "line 4" in capsys.readouterr().err


def test_verify_duplicate_ids_across_files(tmp_path):
    path = tmp_path / "dup.manifest"
    path.write_text("id: psi-3diss\nkind: identity\nlhs: f1\nrhs: f1\n", encoding="utf-8")
    assert run("verify", "shipped:claims.manifest", str(path))[0] == 2


def test_oracle_table_t5():
    code, out = run("oracle", "tschur-over", "-t", "5", "--n-max", "10")
    rows = tsv_rows(out)
    assert code == 0 and len(rows) == 11
    assert all(r["match"] == "true" for r in rows)
    assert rows[6]["series"] == rows[6]["doubled-odd"] == rows[6]["overlined"] == "8"


def test_oracle_single_row():
    _, out = run("oracle", "tschur-over", "-t", "5", "--n-max", "0")
    rows = tsv_rows(out)
    assert len(rows) == 1 and rows[0]["series"] == rows[0]["overlined"] == "1"


def test_oracle_even_t_is_usage_error():
    assert run("oracle", "tschur-over", "-t", "4", "--n-max", "5")[0] == 2


def test_oracle_other_families():
    assert run("oracle", "tschur", "-t", "3", "--n-max", "12")[0] == 0
    assert run("oracle", "overpartition", "--n-max", "8")[0] == 0
    assert run("oracle", "tschur-over-tuple", "-t", "3", "-r", "3", "--n-max", "10")[0] == 0
    assert run("oracle", "tschur-over-tuple", "-t", "3", "--n-max", "10")[0] == 2


def test_scan_lists_23_and_says_conjectural():
    code, out = run("scan", "tschur-over(9)", "24", "32", "--n-max", "200")
    assert code == 0
    assert "conjectural" in out
    assert "23" in [l for l in out.splitlines() if not l.startswith("#")]
    doc = json.loads(run("--format", "json", "scan", "tschur-over(9)", "24", "32")[1])
    assert doc["status"] == "conjectural" and 23 in doc["candidates"]


def test_scan_modulus_one_and_bad_family():
    doc = json.loads(run("--format", "json", "scan", "tschur-over(3)", "5", "1", "--n-max", "3")[1])
    assert doc["candidates"] == [0, 1, 2, 3, 4]
    assert run("scan", "tschur-over(4)", "5", "2")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tschur", "expand", "gf(overpartition)", "--order", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "2\t4"


def test_missing_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_shipped_manifest_is_bundled():
    assert shipped_manifest_text().startswith("#") or "id:" in shipped_manifest_text()
