"""Command implementations behind the ``hnflow`` CLI; each returns a :class:`Report`."""

from __future__ import annotations

import math

from . import acceptance
from .config import ConfigError, RunConfig
from .exact.subspace import Subspace
from .exponents import (
    INFINITY,
    HomFamily,
    QuasiNorm,
    beta_alpha_formula,
    beta_formula,
    candidate_set,
    gamma_bridge,
    omega_formula,
    MultPencil,
    pencil_contains,
)
from .latticeflow import (
    SimConfig,
    capture_report,
    chain_lambda,
    estimate_slopes,
    minkowski_check,
    minkowski_constant,
    simulate,
)
from .report import Report
from .scanner import (
    NotASolution,
    ScanConfig,
    SolutionTooSmall,
    ZeroFormError,
    classify,
    exceptional_subspaces,
    flow_census,
    operator_bound,
    reverify,
    scan_solutions,
    solution_to_flow,
)
from .slopes import (
    Flow,
    HNError,
    HNFiltration,
    MatrixFamily,
    TauOracle,
    flow_sweep,
    hn_filtration,
    lattice_for,
    rational_subspaces,
    slopes_to_lambda,
    tau_pivot,
    tau_single,
)

__all__ = ["COMMANDS", "run_command"]


def _new(cmd, cfg: RunConfig) -> Report:
    return Report(cmd, cfg.raw, cfg.digest, cfg.seed)


def _require_flows(cfg):
    if cfg.family is None:
        raise ConfigError("this command needs a [family] section")
    if not cfg.flows:
        raise ConfigError("this command needs at least one flow")


def _extra(cfg):
    extra = list(cfg.subspaces)
    if cfg.height:
        extra.extend(rational_subspaces(cfg.dim, cfg.height))
    return extra


def _lattice(cfg, a):
    return lattice_for(cfg.family, a, _extra(cfg), cfg.rounds)


def _basis(V: Subspace):
    return [[str(x) for x in r] for r in V.basis]


def cmd_tau(cfg: RunConfig, threads: int = 1) -> Report:
    _require_flows(cfg)
    rep = _new("tau", cfg)
    subspaces = cfg.tau_subspaces or cfg.subspaces or [Subspace.full(cfg.dim)]
    entries = []
    agree = True
    for a in cfg.flows:
        for V in subspaces:
            s = max(tau_single(L, V, a) for L in cfg.family.samples)
            p = max(tau_pivot(L, V, a) for L in cfg.family.samples)
            entries.append({"flow": a.to_list(), "subspace": _basis(V), "dim": V.dim,
                            "tau_single": str(s), "tau_pivot": str(p), "agree": s == p})
            rep.rows.append({"flow": a.to_list(), "subspace": _basis(V), "tau_single": s,
                             "tau_pivot": p, "agree": s == p})
            agree = agree and s == p
    rep.results = {"tau": entries}
    rep.verdicts = {"formulas_agree": agree}
    return rep


def _hn_one(cfg, a):
    lat = _lattice(cfg, a)
    filt = hn_filtration(TauOracle(cfg.family, a), lat)
    return lat, filt


def cmd_hn(cfg: RunConfig, threads: int = 1) -> Report:
    _require_flows(cfg)
    rep = _new("hn", cfg)
    out = []
    for i, a in enumerate(cfg.flows):
        try:
            lat, filt = _hn_one(cfg, a)
        except HNError as exc:
            out.append({"flow": a.to_list(), "error": f"{type(exc).__name__}: {exc}"})
            rep.verdicts[f"hn[{i}]"] = False
            continue
        poly = filt.polygon()
        out.append({
            "flow": a.to_list(),
            "lattice_size": len(lat),
            "saturated": lat.saturated,
            "polygon": poly.to_dict(),
            "filtration": filt.to_dict(),
            "semistable": filt.length == 1,
            "lambda": [str(x) for x in slopes_to_lambda(poly)],
        })
        for step, (V, val) in enumerate(filt.chain):
            slope = filt.slopes[step - 1] if step else None
            rep.rows.append({"flow": a.to_list(), "step": step, "dim": V.dim, "value": val,
                             "slope": slope, "subspace": _basis(V)})
        rep.verdicts[f"hn[{i}]"] = True
    rep.results = {"flows": out}
    return rep


def cmd_sweep(cfg: RunConfig, threads: int = 1) -> Report:
    _require_flows(cfg)
    rep = _new("sweep", cfg)
    try:
        res = flow_sweep(cfg.family, cfg.flows, _extra(cfg), cfg.rounds, threads)
    except AssertionError as exc:
        rep.results = {"error": str(exc)}
        rep.verdicts = {"census_within_bound": False}
        return rep
    except HNError as exc:
        rep.results = {"error": f"{type(exc).__name__}: {exc}"}
        rep.verdicts = {"hn": False}
        return rep
    for a, chain, slopes in res.per_flow:
        for step, V in enumerate(chain, start=1):
            rep.rows.append({"flow": a.to_list(), "step": step, "dim": V.dim,
                             "slope": slopes[step - 1], "subspace": _basis(V)})
    rep.results = {
        "flows": len(res.per_flow),
        "census": [_basis(V) for V in res.census],
        "census_size": res.size,
        "bound": res.bound,
    }
    rep.verdicts = {"census_within_bound": res.within_bound}
    return rep


def _prediction(cfg, a):
    sim = cfg.simulate
    if sim["prediction"] is None:
        return _hn_one(cfg, a)[1]
    oracle = TauOracle(cfg.family, a)
    d = cfg.dim
    chain = [Subspace.zero(d)] + list(sim["prediction"]) + [Subspace.full(d)]
    for U, V in zip(chain, chain[1:]):
        if not (U < V):
            raise ConfigError("simulate.prediction must be a strictly increasing chain of proper subspaces")
    vals = [oracle(V) for V in chain]
    slopes = tuple((v1 - v0) / (V1.dim - V0.dim) for V0, V1, v0, v1 in zip(chain, chain[1:], vals, vals[1:]))
    return HNFiltration(tuple(zip(chain, vals)), slopes)


def cmd_simulate(cfg: RunConfig, threads: int = 1) -> Report:
    _require_flows(cfg)
    if cfg.simulate is None:
        raise ConfigError("simulate needs a [simulate] section")
    sim = cfg.simulate
    rep = _new("simulate", cfg)
    L = cfg.family.samples[sim["matrix"]]
    out = []
    Cd = minkowski_constant(cfg.dim)
    for i, a in enumerate(cfg.flows):
        pred = _prediction(cfg, a)
        sc = SimConfig(L, a, tuple(sim["t_grid"]), sim["margin"], sim["factor"])
        series = simulate(sc, pred, threads)
        lam = [float(x) for x in chain_lambda(pred)]
        est = estimate_slopes(series, sim["window"])
        verdicts = capture_report(series, pred, sim["eps"], sim["capture_from"])
        resid = [minkowski_check(s, L, a) for s in series.snapshots]
        for s in series.snapshots:
            for k, (m, lmt, r, x) in enumerate(zip(s.log_minima(), s.log_minima_over_t, s.radius, s.minimizers)):
                rep.rows.append({"flow": a.to_list(), "t": s.t, "k": k + 1, "log_minimum": m,
                                 "log_minimum_over_t": lmt, "radius": float(r), "minimizer": list(x),
                                 "prec": s.prec})
        out.append({
            "flow": a.to_list(),
            "prediction": pred.to_dict(),
            "predicted_lambda": lam,
            "slope_estimates": est,
            "window": sim["window"],
            "capture": [v.to_dict() for v in verdicts],
            "capture_times": [None if t is None else str(t) for t in series.capture_times],
            "minkowski_residuals": resid,
            "minkowski_constant": Cd,
            "series": [{"t": str(s.t), "log_minima_over_t": s.log_minima_over_t,
                        "minimizers": [list(x) for x in s.minimizers], "prec": s.prec}
                       for s in series.snapshots],
        })
        rep.verdicts[f"capture[{i}]"] = all(v.passed for v in verdicts)
        rep.verdicts[f"minkowski[{i}]"] = max(resid) <= Cd
        if sim["slope_tolerance"] is not None:
            tol = float(sim["slope_tolerance"])
            rep.verdicts[f"slopes[{i}]"] = all(abs(e - l) <= tol for e, l in zip(est, lam))
    rep.results = {"flows": out}
    return rep


def cmd_scan(cfg: RunConfig, threads: int = 1) -> Report:
    if cfg.family is None or cfg.scan is None:
        raise ConfigError("scan needs [family] and [scan] sections")
    sc = cfg.scan
    rep = _new("scan", cfg)
    L = cfg.family.samples[sc["matrix"]]
    scfg = ScanConfig(L, sc["epsilon"], sc["height"], sc["include_zero_products"], sc["norm"])
    sols = scan_solutions(scfg)
    if not sc["include_zero_products"]:
        sols = [s for s in sols if not s.zero_product]
    d = cfg.dim
    C = operator_bound(scfg.L)
    D = 5 * d * (math.log(C) + 8 * d / float(scfg.epsilon))
    reverified = all(reverify(s, scfg) for s in sols)
    flows = {}
    skipped = {"zero_form": 0, "too_small": 0, "not_solution": 0}
    for s in sols:
        try:
            flows[s.x] = solution_to_flow(s.x, scfg.L, scfg.epsilon, C)
        except ZeroFormError:
            skipped["zero_form"] += 1
        except SolutionTooSmall:
            skipped["too_small"] += 1
        except NotASolution:
            # sup-norm solutions need not satisfy the euclidean inequality
            skipped["not_solution"] += 1
    census = flow_census(flows.values())
    catalog = [a for a in cfg.flows if a.is_unimodular() and not a.is_constant()]
    catalog += [Flow(n) for n in sorted(census) if any(n)]
    seen = set()
    catalog = [a for a in catalog if not (a in seen or seen.add(a))]
    exc = exceptional_subspaces(MatrixFamily.single(L), scfg.epsilon, catalog, _extra(cfg) if cfg.subspaces or cfg.height else ())
    cls = classify(sols, exc)
    for s in sols:
        f = flows.get(s.x)
        lo, hi = (None, None) if s.product_log is None else (float(s.product_log[0]), float(s.product_log[1]))
        rep.rows.append({"x": list(s.x), "norm": s.norm, "zero_product": s.zero_product,
                         "product_log_lo": lo, "product_log_hi": hi, "subspace": s.assigned_subspace,
                         "flow_n": None if f is None else list(f.n), "t": None if f is None else f.t})
    bound = (6 * D) ** d
    rep.results = {
        "solutions": [dict(s.to_dict(), flow=None if s.x not in flows else {
            "t": flows[s.x].t, "n": list(flows[s.x].n), "lhs": flows[s.x].lhs, "rhs": flows[s.x].rhs,
            "clamped": list(flows[s.x].clamped)}) for s in sols],
        "count": len(sols),
        "zero_products": sum(s.zero_product for s in sols),
        "skipped_flows": skipped,
        "C": C,
        "D": D,
        "flow_census": sorted(list(n) for n in census),
        "flow_bound": bound,
        "exceptional_subspaces": [_basis(V) for V in exc],
        "classification": cls.to_dict(),
    }
    rep.verdicts = {
        "reverified": reverified,
        "aas": all(f.ok for f in flows.values()),
        "flow_census_bound": len(census) <= bound,
    }
    return rep


def _fmt(v):
    return "inf" if v == INFINITY else str(v)


def cmd_exponents(cfg: RunConfig, threads: int = 1) -> Report:
    ex = cfg.exponents
    if ex is None:
        raise ConfigError("exponents needs an [exponents] section")
    rep = _new("exponents", cfg)
    h = ex["height"]
    res = {}
    if ex["hom"]:
        fam = HomFamily(tuple(ex["hom"]))
        d = fam.source_dim
        cands = candidate_set(d, h)
        b = beta_formula(fam, cands, h)
        res["beta"] = b.to_dict()
        rep.rows.append({"quantity": "beta", "value": _fmt(b.value), "certificate": b.certificate})
        if ex["alphas"] is not None:
            qn = QuasiNorm(tuple(ex["alphas"]), tuple(ex["dual_basis"]))
            ba = beta_alpha_formula(fam, cands, qn, h)
            res["beta_alpha"] = ba.to_dict()
            rep.rows.append({"quantity": "beta_alpha", "value": _fmt(ba.value), "certificate": ba.certificate})
    if ex["mult"]:
        Ys = ex["mult"]
        m, n = len(Ys[0]), len(Ys[0][0])
        om = omega_formula(Ys, candidate_set(m + n, h), h)
        res["omega"] = om.to_dict()
        rep.rows.append({"quantity": "omega", "value": _fmt(om.value), "certificate": om.certificate})
        c = om.certificate
        W = Subspace(m + n, c["W"])
        pencil = MultPencil(tuple(c["I"]), tuple(c["J"]), c["r"], c["s"], W, m, n)
        rep.verdicts["omega_at_least_one"] = om.value >= 1
        rep.verdicts["pencil_contains_samples"] = all(pencil_contains(Y, pencil) for Y in Ys)
    if ex["bridge"] is not None:
        n, m = ex["bridge"]
        a = Flow([n] * m + [-m] * n)
        try:
            _, filt = _hn_one(cfg, a)
            beta = gamma_bridge(filt.polygon(), n, m)
            res["bridge"] = {"flow": a.to_list(), "gamma": str(min(filt.slopes)), "beta": str(beta)}
            rep.rows.append({"quantity": "bridge_beta", "value": str(beta), "certificate": res["bridge"]})
            rep.verdicts["bridge"] = True
        except (ValueError, HNError) as exc:
            res["bridge"] = {"flow": a.to_list(), "error": str(exc)}
            rep.verdicts["bridge"] = False
    rep.results = res
    return rep


def cmd_verify(cfg: RunConfig | None, threads: int = 1, timing: bool = False) -> Report:
    """Acceptance criteria (all, or the configured subset) plus the verdicts of every configured command."""
    if cfg is None:
        rep = Report("verify", {}, "", 0)
        criteria = sorted(acceptance.CRITERIA)
    else:
        rep = _new("verify", cfg)
        has_commands = any(k in cfg.raw for k in ("family", "exponents"))
        if cfg.verify is not None:
            criteria = cfg.verify["criteria"]
        else:
            criteria = [] if has_commands else sorted(acceptance.CRITERIA)
    results = []
    for n in criteria:
        r = acceptance.run_criterion(n, rep.seed)
        results.append(r.to_dict(timing))
        rep.rows.append({"criterion": n, "name": r.name, "passed": r.passed,
                         "runtime": round(r.runtime, 3) if timing else None, "limit": r.limit})
        rep.verdicts[f"criterion_{n}"] = r.passed
    rep.results = {"criteria": results}
    if cfg is not None:
        sub = {}
        for name in _applicable(cfg):
            try:
                r = COMMANDS[name](cfg, threads)
            except ConfigError:
                raise
            except Exception as exc:  # reported as a failed row
                rep.verdicts[f"{name}.error"] = False
                sub[name] = {"error": f"{type(exc).__name__}: {exc}"}
                continue
            sub[name] = {"verdicts": r.verdicts}
            for k, v in r.verdicts.items():
                rep.verdicts[f"{name}.{k}"] = v
                rep.rows.append({"criterion": f"{name}.{k}", "name": name, "passed": v,
                                 "runtime": None, "limit": None})
        rep.results["commands"] = sub
    return rep


def _applicable(cfg: RunConfig) -> list:
    out = []
    if cfg.family is not None and cfg.flows:
        out += ["tau", "hn"]
    if cfg.simulate is not None:
        out.append("simulate")
    if cfg.scan is not None:
        out.append("scan")
    if cfg.exponents is not None:
        out.append("exponents")
    return out


COMMANDS = {
    "tau": cmd_tau,
    "hn": cmd_hn,
    "polygon": cmd_hn,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "scan": cmd_scan,
    "exponents": cmd_exponents,
}


def run_command(name: str, cfg: RunConfig | None, threads: int = 1, timing: bool = False) -> Report:
    if name == "verify":
        return cmd_verify(cfg, threads, timing)
    if cfg is None:
        raise ConfigError(f"{name} requires --config")
    rep = COMMANDS[name](cfg, threads)
    if name == "polygon":
        rep.command = "hn"
    return rep
