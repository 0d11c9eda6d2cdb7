"""Time series of successive minima of ``a_t L Z^d`` and checks against an HN prediction."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from ..exact import linalg
from ..exact.field import to_mpf
from ..exact.subspace import Subspace
from ..slopes.flow import Flow
from ..slopes.polygon import HNFiltration
from .minima import PrecisionError, successive_minima

__all__ = [
    "SimConfig",
    "Snapshot",
    "SnapshotSeries",
    "working_precision",
    "flowed_basis",
    "simulate",
    "estimate_slopes",
    "minkowski_constant",
    "minkowski_check",
    "capture_report",
    "CaptureVerdict",
    "trivial_prediction",
    "chain_lambda",
]


@dataclass(frozen=True)
class SimConfig:
    L: tuple
    a: Flow
    t_grid: tuple
    precision_margin_bits: int = 64
    enumeration_bound_factor: Fraction = Fraction(1)

    def __post_init__(self):
        L = linalg.as_matrix(self.L)
        object.__setattr__(self, "L", L)
        grid = tuple(Fraction(t) for t in self.t_grid)
        if any(t <= 0 for t in grid):
            raise ValueError("grid times must be positive")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("t_grid must be strictly increasing")
        object.__setattr__(self, "t_grid", grid)
        if len(L) != self.a.dim or any(len(r) != self.a.dim for r in L):
            raise ValueError("matrix and flow dimensions differ")
        if Fraction(self.enumeration_bound_factor) < 1:
            raise ValueError("enumeration_bound_factor must be >= 1")
        if self.precision_margin_bits < 0:
            raise ValueError("precision margin must be >= 0")

    @property
    def dim(self) -> int:
        return self.a.dim


@dataclass
class Snapshot:
    t: Fraction
    minima: list  # mpf
    minimizers: tuple
    log_minima_over_t: list  # float
    covol_log: float
    prec: int
    radius: list
    in_V: list = field(default_factory=list)  # per filtration step ell: first d_ell minimizers in V_ell

    def log_minima(self) -> list:
        return [float(mpmath.log(m)) for m in self.minima]


@dataclass
class SnapshotSeries:
    config: SimConfig
    snapshots: list
    capture_times: list  # per ell, None if never captured
    prediction: HNFiltration | None = None


def working_precision(a: Flow, t, L, margin: int) -> int:
    """Bits needed to resolve the flowed matrix after rescaling by ``e^{-A_min t}``.

    Never below ``ceil(t * max|A_i| * log2 e) + margin``.
    """
    t = Fraction(t)
    spread = max(a.weights) - min(a.weights)
    base = math.ceil(float(t * max(abs(w) for w in a.weights)) * math.log2(math.e))
    span = math.ceil(float(t * spread) * math.log2(math.e))
    big = max(float(abs(to_mpf(x, 53))) for r in L for x in r)
    lbits = max(0, math.ceil(math.log2(big))) if big > 0 else 0
    return max(base, span) + lbits + margin + 8


def flowed_basis(L, a: Flow, t, prec: int):
    """mpmath rows of ``e^{-A_min t} a_t L``."""
    t = Fraction(t)
    amin = min(a.weights)
    with mpmath.workprec(prec + 16):
        out = []
        for i, row in enumerate(L):
            e = (a.weights[i] - amin) * t
            scale = mpmath.exp(mpmath.mpf(e.numerator) / e.denominator)
            out.append([scale * to_mpf(x, prec + 16) for x in row])
    return out


def trivial_prediction(d: int) -> HNFiltration:
    return HNFiltration(((Subspace.zero(d), Fraction(0)), (Subspace.full(d), Fraction(0))), (Fraction(0),))


def _snapshot(cfg: SimConfig, t: Fraction, prediction: HNFiltration, retry: bool = True) -> Snapshot:
    prec = working_precision(cfg.a, t, cfg.L, cfg.precision_margin_bits)
    for attempt in range(2 if retry else 1):
        try:
            B = flowed_basis(cfg.L, cfg.a, t, prec)
            res = successive_minima(B, prec, cfg.enumeration_bound_factor)
            break
        except PrecisionError:
            if attempt == 1 or not retry:
                raise
            prec *= 2
    amin = min(cfg.a.weights)
    with mpmath.workprec(prec):
        shift = mpmath.mpf(amin.numerator) / amin.denominator * (mpmath.mpf(t.numerator) / t.denominator)
        logs = [mpmath.log(m) + shift for m in res.minima]
        minima = [mpmath.exp(x) for x in logs]
        tf = mpmath.mpf(t.numerator) / t.denominator
        log_over_t = [float(x / tf) for x in logs]
        covol = float(mpmath.log(abs(_mp_det(cfg.L, prec))) + sum(cfg.a.weights) * tf)
        radius = [r * mpmath.exp(shift) for r in res.radius]
    in_V = []
    for V in prediction.interior:
        k = V.dim
        in_V.append(all(V.contains(x) for x in res.minimizers[:k]))
    return Snapshot(t, minima, res.minimizers, log_over_t, covol, res.prec, radius, in_V)


def _mp_det(L, prec):
    with mpmath.workprec(prec):
        M = mpmath.matrix([[to_mpf(x, prec) for x in r] for r in L])
        return mpmath.det(M)


def simulate(cfg: SimConfig, predicted: HNFiltration | None = None, threads: int = 1) -> SnapshotSeries:
    """Successive minima of ``a_t L Z^d`` at every grid time, with flag-membership flags."""
    d = cfg.dim
    if predicted is None:
        predicted = trivial_prediction(d)
    if predicted.chain[-1][0].ambient_dim != d:
        raise ValueError("prediction lives in a different dimension")
    if threads > 1:
        # mpmath precision is process-global, so workers are processes, not threads
        with ProcessPoolExecutor(max_workers=threads) as pool:
            snaps = list(pool.map(_snapshot, repeat(cfg), cfg.t_grid, repeat(predicted)))
    else:
        snaps = [_snapshot(cfg, t, predicted) for t in cfg.t_grid]
    captures = []
    for ell in range(len(predicted.interior)):
        t_star = None
        for s in reversed(snaps):
            if s.in_V[ell]:
                t_star = s.t
            else:
                break
        captures.append(t_star)
    return SnapshotSeries(cfg, snaps, captures, predicted)


def estimate_slopes(series: SnapshotSeries, window: int) -> list:
    """Least-squares slope of ``log lambda_k`` against t over the last ``window`` snapshots."""
    if window < 2:
        raise ValueError("window must be >= 2")
    snaps = series.snapshots
    if window > len(snaps):
        raise ValueError("window exceeds the number of snapshots")
    use = snaps[-window:]
    ts = [float(s.t) for s in use]
    tm = sum(ts) / len(ts)
    den = sum((t - tm) ** 2 for t in ts)
    d = len(use[0].minima)
    out = []
    for k in range(d):
        ys = [float(mpmath.log(s.minima[k])) for s in use]
        ym = sum(ys) / len(ys)
        out.append(sum((t - tm) * (y - ym) for t, y in zip(ts, ys)) / den)
    return out


def minkowski_constant(d: int) -> float:
    """``d log 2 + log d! + |log omega_d|`` with omega_d the unit-ball volume."""
    omega = math.pi ** (d / 2) / math.gamma(d / 2 + 1)
    return d * math.log(2) + math.lgamma(d + 1) + abs(math.log(omega))


def minkowski_check(snapshot: Snapshot, L, a: Flow, t=None) -> float:
    """``|sum_k log lambda_k - (t sum A_i + log|det L|)|``."""
    if t is None:
        t = snapshot.t
    t = Fraction(t)
    prec = max(snapshot.prec, 64)
    with mpmath.workprec(prec):
        total = mpmath.fsum(mpmath.log(m) for m in snapshot.minima)
        tf = mpmath.mpf(t.numerator) / t.denominator
        s = sum(a.weights, Fraction(0))
        expected = tf * mpmath.mpf(s.numerator) / s.denominator + mpmath.log(abs(_mp_det(L, prec)))
        return float(abs(total - expected))


@dataclass
class CaptureVerdict:
    ell: int
    dim: int
    passed: bool
    capture_time: Fraction | None
    first_violation: tuple | None  # (t, k, minimizer)
    checked: int

    def to_dict(self) -> dict:
        fv = None
        if self.first_violation is not None:
            t, k, x = self.first_violation
            fv = {"t": str(t), "k": k, "minimizer": list(x)}
        return {
            "ell": self.ell,
            "dim": self.dim,
            "passed": self.passed,
            "capture_time": None if self.capture_time is None else str(self.capture_time),
            "first_violation": fv,
            "checked": self.checked,
        }


def chain_lambda(filt: HNFiltration) -> list:
    """Per-dimension exponents read from the chain slopes (no convexity required)."""
    out = []
    for (V0, _), (V1, _), s in zip(filt.chain, filt.chain[1:], filt.slopes):
        out.extend([s] * (V1.dim - V0.dim))
    return out


def capture_report(series: SnapshotSeries, predicted: HNFiltration, eps, t_from=None) -> list:
    """Check the flag-capture implication at every grid time ``t >= t_from``.

    For each step ell, any recorded minimizer ``x`` with
    ``||a_t L x|| <= e^{t (Lambda_{d_ell} - eps)}`` must lie in ``V_{ell-1}``.
    ``t_from`` defaults to the first grid time.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    lam = chain_lambda(predicted)
    chain = predicted.subspaces
    base_dim = chain[0].dim
    snaps = series.snapshots
    if t_from is None:
        t_from = snaps[0].t if snaps else Fraction(0)
    t_from = Fraction(t_from)
    verdicts = []
    for ell in range(1, len(chain)):
        V_ell = chain[ell]
        V_prev = chain[ell - 1]
        d_ell = V_ell.dim - base_dim
        threshold_slope = lam[d_ell - 1] - eps
        violation = None
        checked = 0
        t_star = None
        for s in snaps:
            if s.t < t_from:
                continue
            tf = float(s.t)
            log_bound = tf * float(threshold_slope)
            ok_here = True
            for k, (m, x) in enumerate(zip(s.minima, s.minimizers)):
                if float(mpmath.log(m)) <= log_bound:
                    checked += 1
                    if not V_prev.contains(x):
                        ok_here = False
                        if violation is None:
                            violation = (s.t, k + 1, x)
            if ok_here and t_star is None:
                t_star = s.t
            elif not ok_here:
                t_star = None
        verdicts.append(CaptureVerdict(ell, d_ell, violation is None, t_star, violation, checked))
    return verdicts
