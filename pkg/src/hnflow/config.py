"""Run configuration: TOML schema, exact-literal parsing and validation.

Schema (every section optional except ``family`` for commands that need it)::

    seed = 0

    [field]                       # number field Q(t), one per run
    minpoly = ["-2", "0", "1"]    # ascending coefficients
    interval = ["1", "2"]         # isolates the real root
    symbol = "t"
    trusted = false               # skip the irreducibility test (degree > 3)

    [family]
    label = "roth"
    matrices = [[["1", "t"], ["0", "1"]]]

    [flows]
    weights = [["1", "-1"]]
    random = 0                    # extra random unimodular integer flows
    random_bound = 5

    [candidates]
    subspaces = [[["1", "0"]]]    # basis row-lists
    height = 0                    # also add all rational subspaces of this height
    rounds = 8
    tau = [[["0", "1"]]]          # subspaces evaluated by the tau command

    [simulate]
    matrix = 0
    t_grid = {start = "1", stop = "40", step = "1"}
    precision_margin_bits = 64
    enumeration_bound_factor = "1"
    eps = "1/2"
    window = 16
    capture_from = "2"
    prediction = [[["-1", "1"]]]  # override of the interior filtration terms
    slope_tolerance = "1/20"

    [scan]
    matrix = 0
    epsilon = "1/2"
    height = 100
    norm = "euclidean"
    include_zero_products = true

    [exponents]
    height = 8
    hom = [[["1", "t"]]]          # m x d samples for the pencil exponents
    mult = [[["t"]]]              # m x n samples Y for the multiplicative exponent
    alphas = ["1", "1"]
    dual_basis = [["1", "0"], ["0", "1"]]
    bridge = {n = 1, m = 1}
"""

from __future__ import annotations

import hashlib
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .exact import linalg
from .exact.field import NumberField
from .exact.literals import LiteralError, parse_scalar
from .exact.subspace import Subspace
from .slopes.flow import Flow, MatrixFamily

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config", "canonical_digest"]

SECTIONS = {"seed", "field", "family", "flows", "candidates", "simulate", "scan", "exponents", "verify"}


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass
class RunConfig:
    raw: dict
    seed: int = 0
    number_field: NumberField | None = None
    family: MatrixFamily | None = None
    flows: list = field(default_factory=list)
    subspaces: list = field(default_factory=list)
    height: int = 0
    rounds: int = 8
    tau_subspaces: list = field(default_factory=list)
    simulate: dict | None = None
    scan: dict | None = None
    exponents: dict | None = None
    verify: dict | None = None

    @property
    def dim(self) -> int | None:
        return None if self.family is None else self.family.dim

    @property
    def digest(self) -> str:
        return canonical_digest(self.raw)


def canonical_digest(raw: dict) -> str:
    blob = json.dumps(raw, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def load_config(path) -> RunConfig:
    """Read a TOML config, or the ``inputs`` block of a JSON report."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if path.suffix == ".json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        raw = doc.get("inputs", doc) if isinstance(doc, dict) else doc
    else:
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(raw)


def _need(cond, msg):
    if not cond:
        raise ConfigError(msg)


def _scalar(v, K, where):
    try:
        return parse_scalar(v, K)
    except LiteralError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _rat(v, where):
    x = _scalar(v, None, where)
    _need(isinstance(x, Fraction), f"{where}: expected a rational number")
    return x


def _matrix(rows, K, where):
    _need(isinstance(rows, list) and rows and all(isinstance(r, list) for r in rows),
          f"{where}: expected a list of rows")
    return tuple(tuple(_scalar(x, K, f"{where}[{i}]") for x in r) for i, r in enumerate(rows))


def _subspaces(lst, K, d, where):
    out = []
    _need(isinstance(lst, list), f"{where}: expected a list of bases")
    for i, basis in enumerate(lst):
        m = _matrix(basis, K, f"{where}[{i}]")
        for r in m:
            _need(len(r) == d, f"{where}[{i}]: vectors must have length {d}")
        out.append(Subspace(d, m))
    return out


def _int(v, where, lo=None):
    _need(isinstance(v, int) and not isinstance(v, bool), f"{where}: expected an integer")
    if lo is not None:
        _need(v >= lo, f"{where}: must be >= {lo}")
    return v


def _check_keys(sec, allowed, name):
    extra = set(sec) - set(allowed)
    _need(not extra, f"[{name}]: unknown keys {sorted(extra)}")


def parse_config(raw: dict) -> RunConfig:
    """Validate ``raw`` and build exact objects; rejects dimension mismatches up front."""
    _need(isinstance(raw, dict) and raw, "empty configuration")
    unknown = set(raw) - SECTIONS
    _need(not unknown, f"unknown sections {sorted(unknown)}")
    cfg = RunConfig(raw=raw)
    cfg.seed = _int(raw.get("seed", 0), "seed", 0)

    K = None
    if "field" in raw:
        f = raw["field"]
        _check_keys(f, {"minpoly", "interval", "symbol", "trusted"}, "field")
        _need("minpoly" in f and "interval" in f, "[field] needs minpoly and interval")
        poly = [_rat(c, "field.minpoly") for c in f["minpoly"]]
        iv = [_rat(c, "field.interval") for c in f["interval"]]
        _need(len(iv) == 2, "field.interval needs two endpoints")
        try:
            K = NumberField(poly, iv, str(f.get("symbol", "t")), bool(f.get("trusted", False)))
        except ValueError as exc:
            raise ConfigError(f"[field]: {exc}") from exc
    cfg.number_field = K

    d = None
    if "family" in raw:
        fam = raw["family"]
        _check_keys(fam, {"label", "matrices"}, "family")
        mats = fam.get("matrices")
        _need(isinstance(mats, list) and mats, "[family] needs at least one matrix")
        ms = [_matrix(m, K, f"family.matrices[{i}]") for i, m in enumerate(mats)]
        d = len(ms[0])
        for i, m in enumerate(ms):
            _need(len(m) == d and all(len(r) == d for r in m),
                  f"family.matrices[{i}] must be {d}x{d}")
        try:
            cfg.family = MatrixFamily(tuple(ms), str(fam.get("label", "")))
        except ValueError as exc:
            raise ConfigError(f"[family]: {exc}") from exc

    if "flows" in raw:
        fl = raw["flows"]
        _check_keys(fl, {"weights", "random", "random_bound"}, "flows")
        _need(d is not None, "[flows] requires [family]")
        for i, w in enumerate(fl.get("weights", [])):
            ws = [_rat(x, f"flows.weights[{i}]") for x in w]
            _need(len(ws) == d, f"flows.weights[{i}] must have length {d}")
            cfg.flows.append(Flow(ws))
        count = _int(fl.get("random", 0), "flows.random", 0)
        bound = _int(fl.get("random_bound", 5), "flows.random_bound", 1)
        rng = random.Random(cfg.seed)
        for _ in range(count):
            cfg.flows.append(random_unimodular_flow(rng, d, bound))

    if "candidates" in raw:
        c = raw["candidates"]
        _check_keys(c, {"subspaces", "height", "rounds", "tau"}, "candidates")
        _need(d is not None, "[candidates] requires [family]")
        cfg.subspaces = _subspaces(c.get("subspaces", []), K, d, "candidates.subspaces")
        cfg.height = _int(c.get("height", 0), "candidates.height", 0)
        cfg.rounds = _int(c.get("rounds", 8), "candidates.rounds", 0)
        cfg.tau_subspaces = _subspaces(c.get("tau", []), K, d, "candidates.tau")

    if "simulate" in raw:
        cfg.simulate = _parse_simulate(raw["simulate"], K, d, cfg)
    if "scan" in raw:
        cfg.scan = _parse_scan(raw["scan"], d, cfg)
    if "exponents" in raw:
        cfg.exponents = _parse_exponents(raw["exponents"], K, d)
    if "verify" in raw:
        v = raw["verify"]
        _check_keys(v, {"criteria"}, "verify")
        crit = v.get("criteria", list(range(1, 11)))
        _need(isinstance(crit, list) and all(isinstance(x, int) and 1 <= x <= 10 for x in crit),
              "verify.criteria must list numbers from 1 to 10")
        cfg.verify = {"criteria": crit}
    _need(any(k in raw for k in ("family", "exponents", "verify")), "no command target in configuration")
    return cfg


def random_unimodular_flow(rng: random.Random, d: int, bound: int) -> Flow:
    """Integer weights in ``[-bound, bound]`` shifted to sum zero (rational shift)."""
    while True:
        w = [Fraction(rng.randint(-bound, bound)) for _ in range(d)]
        mean = sum(w) / d
        w = [x - mean for x in w]
        if any(w):
            return Flow(w)


def _matrix_index(sec, cfg, name):
    _need(cfg.family is not None, f"[{name}] requires [family]")
    idx = _int(sec.get("matrix", 0), f"{name}.matrix", 0)
    _need(idx < len(cfg.family.samples), f"{name}.matrix out of range")
    return idx


def _parse_simulate(s, K, d, cfg):
    _check_keys(s, {"matrix", "t_grid", "precision_margin_bits", "enumeration_bound_factor", "eps",
                    "window", "capture_from", "prediction", "slope_tolerance"}, "simulate")
    out = {"matrix": _matrix_index(s, cfg, "simulate")}
    _need(cfg.flows, "[simulate] needs at least one flow")
    g = s.get("t_grid")
    _need(isinstance(g, dict) and {"start", "stop", "step"} <= set(g), "simulate.t_grid needs start, stop, step")
    start, stop, step = (_rat(g[k], f"simulate.t_grid.{k}") for k in ("start", "stop", "step"))
    _need(start > 0 and step > 0 and stop >= start, "simulate.t_grid must be positive and increasing")
    grid = []
    t = start
    while t <= stop:
        grid.append(t)
        t += step
    _need(len(grid) <= 10000, "simulate.t_grid has too many points")
    out["t_grid"] = grid
    out["margin"] = _int(s.get("precision_margin_bits", 64), "simulate.precision_margin_bits", 0)
    out["factor"] = _rat(s.get("enumeration_bound_factor", "1"), "simulate.enumeration_bound_factor")
    _need(out["factor"] >= 1, "simulate.enumeration_bound_factor must be >= 1")
    out["eps"] = _rat(s.get("eps", "1/2"), "simulate.eps")
    _need(out["eps"] > 0, "simulate.eps must be positive")
    out["window"] = _int(s.get("window", min(len(grid), 16)), "simulate.window", 2)
    _need(out["window"] <= len(grid), "simulate.window exceeds the grid")
    out["capture_from"] = _rat(s["capture_from"], "simulate.capture_from") if "capture_from" in s else None
    out["prediction"] = _subspaces(s["prediction"], K, d, "simulate.prediction") if "prediction" in s else None
    out["slope_tolerance"] = _rat(s["slope_tolerance"], "simulate.slope_tolerance") if "slope_tolerance" in s else None
    return out


def _parse_scan(s, d, cfg):
    _check_keys(s, {"matrix", "epsilon", "height", "norm", "include_zero_products"}, "scan")
    out = {"matrix": _matrix_index(s, cfg, "scan")}
    _need("epsilon" in s and "height" in s, "[scan] needs epsilon and height")
    out["epsilon"] = _rat(s["epsilon"], "scan.epsilon")
    _need(out["epsilon"] > 0, "scan.epsilon must be positive")
    out["height"] = _int(s["height"], "scan.height", 1)
    out["norm"] = s.get("norm", "euclidean")
    _need(out["norm"] in ("euclidean", "sup"), "scan.norm must be euclidean or sup")
    out["include_zero_products"] = bool(s.get("include_zero_products", True))
    return out


def _parse_exponents(e, K, d):
    _check_keys(e, {"height", "hom", "mult", "alphas", "dual_basis", "bridge"}, "exponents")
    out = {"height": _int(e.get("height", 4), "exponents.height", 0)}
    hom = [_matrix(m, K, f"exponents.hom[{i}]") for i, m in enumerate(e.get("hom", []))]
    if hom:
        shape = (len(hom[0]), len(hom[0][0]))
        for i, m in enumerate(hom):
            _need(len(m) == shape[0] and all(len(r) == shape[1] for r in m),
                  f"exponents.hom[{i}] must be {shape[0]}x{shape[1]}")
    out["hom"] = hom
    mult = [_matrix(m, K, f"exponents.mult[{i}]") for i, m in enumerate(e.get("mult", []))]
    if mult:
        shape = (len(mult[0]), len(mult[0][0]))
        for i, m in enumerate(mult):
            _need(len(m) == shape[0] and all(len(r) == shape[1] for r in m),
                  f"exponents.mult[{i}] must be {shape[0]}x{shape[1]}")
    out["mult"] = mult
    out["alphas"] = None
    if "alphas" in e:
        _need(hom, "exponents.alphas needs hom samples")
        al = [_rat(a, "exponents.alphas") for a in e["alphas"]]
        _need(len(al) == len(hom[0][0]), "exponents.alphas must match the source dimension")
        out["alphas"] = al
        if "dual_basis" in e:
            U = _matrix(e["dual_basis"], K, "exponents.dual_basis")
            _need(len(U) == len(al) and all(len(r) == len(al) for r in U),
                  "exponents.dual_basis must be square of the source dimension")
            out["dual_basis"] = U
        else:
            out["dual_basis"] = linalg.identity(len(al))
    out["bridge"] = None
    if "bridge" in e:
        b = e["bridge"]
        _need(isinstance(b, dict) and {"n", "m"} <= set(b), "exponents.bridge needs n and m")
        n, m = _int(b["n"], "exponents.bridge.n", 1), _int(b["m"], "exponents.bridge.m", 1)
        _need(d is not None and d == n + m, "exponents.bridge needs a [family] of dimension n + m")
        out["bridge"] = (n, m)
    return out
