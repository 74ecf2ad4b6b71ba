import io
import json
import math

import pytest

from genstats.cli import EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, EXIT_RESOURCE, main, small_groups
from genstats.complex import format_complex, minimal_sphere_triangulation
from genstats.identities import parse_rows
from genstats.model import build_model
from genstats.group import parse_group

T_JUNCTION = "U[02] U[03]^-1 U[01] U[02]^-1 U[03] U[01]^-1\n"


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_report(capsys):
    code, out, err = run(capsys, ["compute", "-d", "2", "-p", "0", "-G", "Z2"])
    assert code == EXIT_OK
    doc = json.loads(out)
    assert [g["order"] for g in doc["group"]] == [4]
    assert doc["model"] == {"configurations": 8, "generators": 6, "columns": 48}
    assert doc["spec"]["depth"] == 3 and doc["saturated"]
    (phase,) = doc["realised_phase_k1"]
    assert phase == pytest.approx(math.pi / 2) or phase == pytest.approx(3 * math.pi / 2)
    assert "T = Z4" in err


def test_compute_then_classify(capsys, tmp_path):
    code, out, _ = run(capsys, ["compute", "-d", "2", "-G", "Z3"])
    g = json.loads(out)["group"][0]
    word = tmp_path / "w.txt"
    word.write_text(g["witness_word"])
    code, out, _ = run(capsys, ["classify", "-d", "2", "-G", "Z3", str(word), "--start", str(g["witness_start"])])
    doc = json.loads(out)
    assert code == EXIT_OK and doc["invariant"] and doc["orders"] == [3] and doc["torsion"] != [0]


def test_classify_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(T_JUNCTION))
    code, out, err = run(capsys, ["classify", "-d", "2", "-G", "Z4", "-"])
    doc = json.loads(out)
    assert code == EXIT_OK and doc["orders"] == [8] and math.gcd(doc["torsion"][0], 8) == 1
    assert doc["violations"] == []


def test_classify_open_word(capsys, tmp_path):
    word = tmp_path / "w.txt"
    word.write_text("U[01]")
    code, out, _ = run(capsys, ["classify", "-d", "2", "-G", "Z2", str(word)])
    assert code == EXIT_INPUT and json.loads(out)["error"] == "invalid-input"


@pytest.mark.parametrize("argv", [
    ["compute", "-d", "2", "-G", "Q8"],
    ["compute", "-d", "2", "-p", "2"],
    ["compute", "-d", "0"],
    ["compute", "-d", "2", "--depth", "1"],
    ["compute", "-d", "2", "--complex", "/no/such/file"],
    ["classify", "-d", "2", "/no/such/word"],
])
def test_invalid_input(capsys, argv):
    code, out, _ = run(capsys, argv)
    assert code == EXIT_INPUT
    assert json.loads(out)["error"] == "invalid-input"


def test_resource_limit(capsys):
    code, out, _ = run(capsys, ["compute", "-d", "3", "-p", "1", "--cap", "10"])
    assert code == EXIT_RESOURCE and json.loads(out)["error"] == "resource-limit"


def test_dump_rows_and_out(capsys, tmp_path):
    rows_file, out_file = tmp_path / "rows.txt", tmp_path / "report.json"
    code, out, _ = run(capsys, ["compute", "-d", "2", "-p", "1", "-G", "Z2xZ2", "--dump-rows", str(rows_file),
                                "--out", str(out_file), "--seed", "3"])
    assert code == EXIT_OK and out == ""
    doc = json.loads(out_file.read_text())
    assert [g["order"] for g in doc["group"]] == [2, 2]
    m = build_model(minimal_sphere_triangulation(2), parse_group("Z2xZ2"), 1)
    assert len(parse_rows(m, rows_file.read_text())) == doc["identity_rows"]


def test_complex_file(capsys, tmp_path):
    f = tmp_path / "s2.txt"
    f.write_text(format_complex(minimal_sphere_triangulation(2)))
    code, out, _ = run(capsys, ["compute", "-d", "2", "--complex", str(f)])
    assert code == EXIT_OK and [g["order"] for g in json.loads(out)["group"]] == [4]
    code, _, _ = run(capsys, ["compute", "-d", "3", "--complex", str(f)])
    assert code == EXIT_INPUT


def test_budget_reports_unsaturated(capsys):
    code, out, _ = run(capsys, ["compute", "-d", "2", "--budget", "10"])
    doc = json.loads(out)
    assert code == EXIT_OK and not doc["saturated"] and doc["identity_rows"] == 10


def test_table(capsys, tmp_path):
    out_file = tmp_path / "t.json"
    code, _, err = run(capsys, ["table", "--max-group-size", "3", "--dims", "1,2", "--out", str(out_file)])
    assert code == EXIT_OK
    rows = json.loads(out_file.read_text())
    assert rows and all(r["status"] in ("match", "skipped") for r in rows)
    assert any(r["status"] == "match" for r in rows)


def test_table_mismatch_exit(capsys, monkeypatch):
    monkeypatch.setattr("genstats.cli.expected_factors", lambda d, p, orders: [99])
    code, _, _ = run(capsys, ["table", "--max-group-size", "2", "--dims", "1"])
    assert code == EXIT_MISMATCH


def test_small_groups():
    assert small_groups(4) == [[2], [3], [4], [2, 2]]
    assert [2, 4] in small_groups(8) and [4, 2] not in small_groups(8)
