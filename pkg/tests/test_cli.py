import json

import numpy as np
import pytest

from tenfold import classify
from tenfold.cli import bundled_examples, main, parse_document, render_table
from tenfold.errors import ParseError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_table_rows(capsys):
    code, out, _ = run(capsys, "table")
    assert code == 0
    rows = out.strip().splitlines()[2:]
    assert len(rows) == 10
    s2 = next(r for r in rows if r.startswith("2 "))
    assert "AII" in s2 and "TRS+Q" in s2 and "KO_4" in s2
    s7 = next(r for r in rows if r.startswith("7 "))
    assert "BDI" in s7 and "KO_1" in s7 and "+1 +1" in s7
    assert render_table() == render_table()


@pytest.mark.parametrize("syms, expected", [("Q", "A / KU_0"), ("SRS", "C / KO_6"), ("TRS,Q,PHS", "CII / KO_5")])
def test_classify(capsys, syms, expected):
    code, out, _ = run(capsys, "classify", "--symmetries", syms)
    assert code == 0 and out.strip() == expected


def test_classify_inadmissible(capsys):
    code, _, err = run(capsys, "classify", "--symmetries", "PHS")
    assert code == 2 and "inadmissible" in err


def test_usage_error(capsys):
    assert main(["frobnicate"]) == 2


@pytest.mark.parametrize("name, cartan, group", [
    ("class_D_minimal", "D", "Z2"),
    ("class_AI_kramers", "AI", "Z"),
    ("class_BDI_chain", "BDI", "Z2"),
])
def test_analyze_bundled(capsys, name, cartan, group):
    code, out, _ = run(capsys, "analyze", name, "--seed", "1")
    assert code == 0
    report = json.loads(out)
    assert report["label"]["cartan"] == cartan
    assert report["invariant"]["group"] == group
    assert report["invariant"]["stable_under_perturbation"]


def test_analyze_is_deterministic(capsys):
    _, a, _ = run(capsys, "analyze", "class_D_pair", "--seed", "3")
    _, b, _ = run(capsys, "analyze", "class_D_pair", "--seed", "3")
    assert a == b


def test_all_bundled_examples_parse_and_roundtrip():
    names = bundled_examples()
    assert "class_D_minimal" in names and "class_AI_kramers" in names
    from tenfold.cli import load_input

    for name in names:
        doc = parse_document(load_input(name))
        once = doc.to_json()
        assert parse_document(once).to_json() == once


def test_fock_input(tmp_path, capsys):
    doc = {"dim_v": 2, "theta": [[1, 0], [0, [-2, 0]]], "xi": [[0, [0.5, 0]], [[-0.5, 0], 0]], "symmetries": []}
    path = tmp_path / "h.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0 and json.loads(out)["label"]["cartan"] == "D"


def test_malformed_matrix_location(tmp_path, capsys):
    doc = {"dim_v": 2, "bdg": {"P": [[1, 0], [0]], "Delta": [[0, 0], [0, 0]]}}
    with pytest.raises(ParseError) as info:
        parse_document(json.dumps(doc))
    assert info.value.location == "$.bdg.P[1]"
    path = tmp_path / "bad.json"
    path.write_text('{"dim_v": 2,\n "bdg": [1,, 2]}')
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 3 and "line 2" in err


def test_symmetry_violation_exit_code(tmp_path, capsys):
    doc = {
        "dim_v": 2,
        "bdg": {"P": [[1, 0.3], [0.3, -1]], "Delta": [[0, 0], [0, 0]]},
        "symmetries": [{"kind": "TRS", "antilinear": True, "matrix": [[0, 1], [-1, 0]]}],
    }
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 1 and "SymmetryViolated" in err


def test_clifford_iso(capsys):
    code, out, _ = run(capsys, "clifford-iso", "1", "0", "0", "1")
    assert code == 0 and "verified" in out


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--level", "quick")
    assert code == 0 and "3/3 checks passed" in out


def test_selftest_detects_table_corruption(capsys, monkeypatch):
    rows = list(classify.TABLE)
    rows[2] = classify.ClassLabel(2, "AII", "KO", 5, rows[2].abstract_view, rows[2].flags)
    monkeypatch.setattr(classify, "TABLE", tuple(rows))
    code, out, _ = run(capsys, "selftest", "--level", "quick")
    assert code == 1 and "FAIL" in out
