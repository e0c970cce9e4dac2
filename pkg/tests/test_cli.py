from pathlib import Path

import pytest
import yaml

from isochron.cli import EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK, main

SPECS = Path(__file__).resolve().parent.parent / "scripts" / "specs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def payload_of(text):
    doc = yaml.safe_load(text)
    assert doc["format_version"] == 1
    return doc["payload"]


def test_catalog_list_and_show(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == EXIT_OK
    ids = [f["id"] for f in yaml.safe_load(out)["families"]]
    assert len(ids) == 18 and "deg5.case2" in ids
    code, out, _ = run(capsys, "catalog", "show", "deg4.family1.case2")
    assert code == EXIT_OK and yaml.safe_load(out)["urabe"]


def test_conditions_full_c4(capsys):
    code, out, _ = run(capsys, "conditions", SPECS / "full_c4.yaml", "--order-m", 2)
    assert code == EXIT_OK
    pl = payload_of(out)
    assert pl["order_m"] == 2 and pl["method"] == "series"
    assert "&id" not in out


def test_conditions_linear_center_is_empty(capsys):
    code, out, _ = run(capsys, "conditions", SPECS / "linear.yaml", "--order-m", 3)
    assert code == EXIT_OK
    pl = payload_of(out)
    assert all(str(c.get("normalized", "0")) == "0" for c in pl.get("conditions", []))


def test_groebner_lex_example(capsys):
    code, out, _ = run(capsys, "groebner", SPECS / "lex_example.yaml")
    assert code == EXIT_OK
    pl = payload_of(out)
    assert pl["basis"] == ["y^3 - z^2", "x*z - y^2", "x*y - z", "x^2 - y"]
    assert pl["complete"] and not pl["unit_ideal"]


def test_groebner_budget_is_inconclusive(capsys, tmp_path):
    f = tmp_path / "cyclic4.yaml"
    f.write_text(yaml.safe_dump({
        "format_version": 1,
        "generators": ["a+b+c+d", "a*b+b*c+c*d+d*a", "a*b*c+b*c*d+c*d*a+d*a*b", "a*b*c*d-1"],
        "order": {"kind": "degrevlex", "variables": ["a", "b", "c", "d"]}}))
    code, _, err = run(capsys, "groebner", f, "--budget-pairs", 1)
    assert code == EXIT_INCONCLUSIVE and "budget" in err


def test_budget_from_environment(capsys, tmp_path, monkeypatch):
    f = tmp_path / "cyclic4.yaml"
    f.write_text(yaml.safe_dump({
        "format_version": 1,
        "generators": ["a+b+c+d", "a*b+b*c+c*d+d*a", "a*b*c+b*c*d+c*d*a+d*a*b", "a*b*c*d-1"],
        "order": {"kind": "degrevlex", "variables": ["a", "b", "c", "d"]}}))
    monkeypatch.setenv("ISOCHRON_BUDGET_PAIRS", "1")
    code, _, _ = run(capsys, "groebner", f)
    assert code == EXIT_INCONCLUSIVE


def test_verify_family(capsys):
    code, out, _ = run(capsys, "verify", "deg4.family1.case1", "--order-m", 5)
    assert code == EXIT_OK
    assert payload_of(out)["verdict"] != "failed"


def test_abel_degree_three(capsys):
    code, out, _ = run(capsys, "abel", 3, "--order-m", 5)
    assert code == EXIT_OK
    pl = payload_of(out)
    assert pl["normal_forms"]["3*a2 - a1^2"] == "0"
    assert pl["radical_membership"]["27*a3 - a1^3"] is True


def test_period_scan(capsys):
    code, out, _ = run(capsys, "period", SPECS / "abel_a2.yaml", "--hi", 0.4)
    assert code == EXIT_OK
    pl = payload_of(out)
    assert pl["classification"] == "decreasing" and pl["consistent"] is True


def test_period_refuses_free_coefficients(capsys):
    code, _, err = run(capsys, "period", SPECS / "full_c4.yaml")
    assert code == EXIT_INPUT and "input error" in err


@pytest.mark.parametrize("argv", [["verify", "no.such.family"], ["catalog", "show", "nope"]])
def test_input_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_INPUT


def test_missing_file_is_input_error(capsys, tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("format_version: 1\nsystem: {kind: cn, degree: 2, coefficients: {a_2_0: 'x+'}}\n")
    code, _, _ = run(capsys, "conditions", bad)
    assert code == EXIT_INPUT


def test_out_file(capsys, tmp_path):
    dest = tmp_path / "r.yaml"
    code, out, _ = run(capsys, "groebner", SPECS / "lex_example.yaml", "--out", dest)
    assert code == EXIT_OK and out == ""
    assert payload_of(dest.read_text())["basis"][0] == "y^3 - z^2"


def test_payload_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        _, out, _ = run(capsys, "conditions", SPECS / "quadratic_a20.yaml", "--order-m", 4)
        doc = yaml.safe_load(out)
        outs.append(yaml.safe_dump(doc["payload"], sort_keys=False))
    assert outs[0] == outs[1]
