"""Machine-readable reports: JSON mirroring :class:`Report`, CSV tables with fixed columns."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from . import __version__

__all__ = ["Report", "CSV_COLUMNS", "to_json", "to_csv"]

# column order per command; rows are produced by the command implementations
CSV_COLUMNS = {
    "tau": ["flow", "subspace", "tau_single", "tau_pivot", "agree"],
    "hn": ["flow", "step", "dim", "value", "slope", "subspace"],
    "sweep": ["flow", "step", "dim", "slope", "subspace"],
    "simulate": ["flow", "t", "k", "log_minimum", "log_minimum_over_t", "radius", "minimizer", "prec"],
    "scan": ["x", "norm", "zero_product", "product_log_lo", "product_log_hi", "subspace", "flow_n", "t"],
    "exponents": ["quantity", "value", "certificate"],
    "verify": ["criterion", "name", "passed", "runtime", "limit"],
}


@dataclass
class Report:
    command: str
    inputs: dict
    digest: str
    seed: int
    results: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    wall_time: float | None = None
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "version": self.version,
            "digest": self.digest,
            "seed": self.seed,
            "inputs": self.inputs,
            "results": self.results,
            "verdicts": self.verdicts,
            "passed": self.passed,
            "wall_time": self.wall_time,
        }


def _default(o):
    # Fractions and number-field elements are written as exact strings
    return str(o)


def to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, default=_default) + "\n"


def to_csv(report: Report) -> str:
    cols = CSV_COLUMNS[report.command]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in report.rows:
        w.writerow([_cell(row.get(c)) for c in cols])
    return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, separators=(",", ":"), default=_default)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)
