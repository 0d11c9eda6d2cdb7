import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

import hnflow
from hnflow.cli import main
from hnflow.report import CSV_COLUMNS

FIX = Path(hnflow.__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hn_identity(capsys):
    code, out, err = run(capsys, "hn", "--config", str(FIX / "identity3.toml"))
    assert code == 0
    rep = json.loads(out)
    assert rep["command"] == "hn" and rep["passed"]
    flow = rep["results"]["flows"][0]
    assert flow["polygon"]["vertices"] == [[0, "0"], [1, "-1"], [2, "-1"], [3, "0"]]
    assert "PASS" in err


def test_polygon_alias(capsys):
    code, out, _ = run(capsys, "polygon", "--config", str(FIX / "identity3.toml"), "--quiet")
    assert code == 0 and json.loads(out)["command"] == "hn"


def test_reports_are_byte_identical(capsys):
    args = ("simulate", "--config", str(FIX / "roth.toml"), "--quiet")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args, "--threads", "3")
    assert a == b
    assert json.loads(a)["wall_time"] is None


def test_timing_records_wall_time(capsys):
    _, out, _ = run(capsys, "tau", "--config", str(FIX / "roth.toml"), "--quiet", "--timing")
    assert json.loads(out)["wall_time"] >= 0


def test_rerun_from_report(capsys, tmp_path):
    first = tmp_path / "first.json"
    assert run(capsys, "exponents", "--config", str(FIX / "roth.toml"), "--out", str(first), "--quiet")[0] == 0
    _, again, _ = run(capsys, "exponents", "--config", str(first), "--quiet")
    assert again == first.read_text()


def test_seed_override_changes_digest(capsys):
    _, a, _ = run(capsys, "sweep", "--config", str(FIX / "census3.toml"), "--quiet")
    _, b, _ = run(capsys, "sweep", "--config", str(FIX / "census3.toml"), "--quiet", "--seed", "9")
    ra, rb = json.loads(a), json.loads(b)
    assert ra["digest"] != rb["digest"] and rb["inputs"]["seed"] == 9 and rb["seed"] == 9


def test_precision_margin_override(capsys):
    _, out, _ = run(capsys, "simulate", "--config", str(FIX / "shear.toml"), "--quiet", "--precision-margin", "80")
    assert json.loads(out)["inputs"]["simulate"]["precision_margin_bits"] == 80


@pytest.mark.parametrize("command,fixture", [
    ("tau", "roth.toml"), ("hn", "shear.toml"), ("sweep", "census3.toml"),
    ("simulate", "shear.toml"), ("scan", "scan_sqrt2.toml"), ("exponents", "roth.toml"),
])
def test_csv_header(capsys, command, fixture):
    code, out, _ = run(capsys, command, "--config", str(FIX / fixture), "--format", "csv", "--quiet")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == CSV_COLUMNS[command]
    assert len(rows) > 1


def test_corrupted_prediction_exits_1(capsys):
    code, _, err = run(capsys, "simulate", "--config", str(FIX / "shear_corrupted.toml"))
    assert code == 1
    assert "FAIL" in err


def test_omega_zero_fixture(capsys):
    code, out, _ = run(capsys, "exponents", "--config", str(FIX / "omega_zero.toml"), "--quiet")
    assert code == 0
    assert json.loads(out)["results"]["omega"]["value"] == "inf"


def test_config_errors_exit_2(capsys, tmp_path):
    empty = tmp_path / "empty.toml"
    empty.write_text("")
    assert run(capsys, "hn", "--config", str(empty))[0] == 2
    assert run(capsys, "hn")[0] == 2
    assert run(capsys, "hn", "--config", str(tmp_path / "nope.toml"))[0] == 2
    assert run(capsys, "hn", "--config", str(FIX / "roth.toml"), "--threads", "0")[0] == 2
    mismatch = tmp_path / "mismatch.toml"
    mismatch.write_text('[family]\nmatrices = [[["1","0"],["0","1"]]]\n[flows]\nweights = [["1","0","-1"]]\n')
    code, _, err = run(capsys, "hn", "--config", str(mismatch))
    assert code == 2 and "length 2" in err


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("HNFLOW_THREADS", "x")
    assert run(capsys, "tau", "--config", str(FIX / "roth.toml"))[0] == 2
    monkeypatch.setenv("HNFLOW_THREADS", "2")
    assert run(capsys, "tau", "--config", str(FIX / "roth.toml"), "--quiet")[0] == 0


def test_usage_error_exits_2():
    proc = subprocess.run([sys.executable, "-m", "hnflow.cli", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_verify_selected_criteria(capsys, tmp_path):
    p = tmp_path / "v.toml"
    p.write_text("[verify]\ncriteria = [1, 8]\n")
    code, out, err = run(capsys, "verify", "--config", str(p))
    assert code == 0
    rep = json.loads(out)
    assert len(rep["verdicts"]) == 2 and all(rep["verdicts"].values())
