import json
import subprocess
import sys

import pytest

from signed_spectra.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_range():
    assert parse_range("5") == [5]
    assert parse_range("5..7") == [5, 6, 7]
    assert parse_range("5,7..8") == [5, 7, 8]


def test_index_frustration_girth(capsys):
    code, out, _ = run(capsys, "index", "--graph", "3 3 0 1 - 0 2 + 1 2 +")
    assert code == 0 and out.startswith("1,")
    code, out, _ = run(capsys, "frustration", "--graph", "4 6 0 1 - 0 2 - 0 3 - 1 2 - 1 3 - 2 3 -")
    assert code == 0 and out.split(",")[0] == "2"
    code, out, _ = run(capsys, "girth", "--graph", "5 5 0 1 - 1 2 + 2 3 + 3 4 + 0 4 +")
    assert code == 0 and out.strip() == "5,0 1 2 3 4"
    code, out, _ = run(capsys, "girth", "--graph", "D~{ -+++++++++", "--r", "4")
    assert code == 0


def test_graph6_input_and_file(tmp_path, capsys):
    f = tmp_path / "graphs.txt"
    f.write_text("# two graphs\nBw -++\nC~\n")
    code, out, _ = run(capsys, "index", "--file", str(f))
    assert code == 0 and len(out.splitlines()) == 2


def test_gamma1_table(capsys):
    code, out, _ = run(capsys, "gamma1-table", "--n", "5..8", "--no-header")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("n,lambda1")
    assert lines[1].startswith("5,2.2360679775,")
    assert all(line.endswith(",1,3") for line in lines[1:])


def test_verify_c4_small(tmp_path, capsys):
    rec = tmp_path / "rec.csv"
    code, out, _ = run(capsys, "verify-c4", "--n", "5..6", "--no-header", "--records", str(rec))
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1 and "generated" not in doc
    assert [r["verdict"] for r in doc["reports"]] == ["unique-gamma1"] * 2
    assert all(a["matches_claims"] for r in doc["reports"] for a in r["audits"])
    assert len(rec.read_text().splitlines()) == 1 + 193 + 4316


def test_verify_c4_zero_survey(capsys):
    code, out, _ = run(capsys, "verify-c4", "--n", "5", "--zero-survey", "--no-header")
    survey = json.loads(out)["reports"][0]["zero_component_survey"]
    assert code == 0 and survey["checked"] == 156


def test_header_present_by_default(capsys):
    code, out, _ = run(capsys, "verify-c4", "--n", "5")
    assert code == 0 and "generated" in json.loads(out)


def test_search_is_byte_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, _, _ = run(capsys, "search", "--n", "12", "--r", "5", "--seed", "1", "--iters", "2000",
                         "--restarts", "2", "--threads", "1", "--no-header", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["report"]["verdict"] in ("unique-gamma1", "inconclusive")


def test_bounds_audit(tmp_path, capsys):
    out = tmp_path / "b.csv"
    code, _, err = run(capsys, "bounds-audit", "--classes-up-to", "4", "--random", "20", "--max-n", "8",
                       "--gamma1", "5..7", "--no-header", "--out", str(out))
    assert code == 0 and "0 violations" in err
    rows = out.read_text().splitlines()
    assert rows[0] == "graph_id,lambda1,hong,stanic,slack_hong,slack_stanic"
    # classes: 1 + 1 + 3 + 18 for n = 1..4
    assert len(rows) == 1 + 23 + 20 + 3


@pytest.mark.parametrize(
    "argv",
    [
        ["gamma1-table", "--n", "4"],
        ["verify-c4", "--n", "8"],
        ["verify-c4", "--n", "4"],
        ["search", "--n", "12", "--r", "3"],
        ["index"],
        ["index", "--graph", "3 1 0 0 +"],
        ["nonsense"],
        ["search", "--n", "12"],
        ["gamma1-table", "--n", "5", "--threads", "0"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 2


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("SIGNED_SPECTRA_THREADS", "lots")
    code, _, _ = run(capsys, "gamma1-table", "--n", "5")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "signed_spectra", "index", "--graph", "2 1 0 1 -"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("1,")
