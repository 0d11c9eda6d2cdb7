import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

from hnflow.report import Report, to_csv, to_json

ROOT = Path(__file__).resolve().parents[1]


def test_json_is_sorted_and_exact():
    rep = Report("exponents", {"seed": 0}, "abc", 0, results={"beta": Fraction(1, 3)},
                 verdicts={"ok": True})
    data = json.loads(to_json(rep))
    assert data["results"]["beta"] == "1/3"
    assert data["passed"] is True
    assert list(data) == sorted(data)


def test_csv_cells():
    rep = Report("exponents", {}, "abc", 0,
                 rows=[{"quantity": "omega", "value": "inf", "certificate": {"r": 0}}])
    assert to_csv(rep) == 'quantity,value,certificate\nomega,inf,"{""r"":0}"\n'


def test_failed_verdict():
    assert not Report("hn", {}, "", 0, verdicts={"a": True, "b": False}).passed


def test_benchmark_smoke():
    script = ROOT / "benchmarks" / "bench_kernels.py"
    proc = subprocess.run([sys.executable, str(script), "--scan-height", "50", "--bases", "2",
                           "--dim", "3", "--enum-dim", "6", "--repeat", "1"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert "python" in proc.stdout
