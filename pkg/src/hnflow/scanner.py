"""Integer solutions of the product inequality and the solution-to-flow rounding.

The inequality is ``prod_i |L_i(x)| <= ||x||^(-eps)`` over primitive integer
vectors ``x`` (one representative per sign pair).  A float prefilter with
rigorous error slack proposes candidates; each one is then decided exactly
(rational data) or by refined dyadic intervals (number-field data).
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from . import kernels
from .exact import linalg
from .exact.field import NFElem, real_value, to_mpf
from .exact.subspace import Subspace
from .slopes.flow import Flow, MatrixFamily
from .slopes.lattice import lattice_for
from .slopes.polygon import hn_filtration
from .slopes.tau import TauOracle

__all__ = [
    "ScanConfig",
    "Solution",
    "scan_solutions",
    "reverify",
    "Classification",
    "classify",
    "operator_bound",
    "FlowFromSolution",
    "SolutionTooSmall",
    "ZeroFormError",
    "NotASolution",
    "solution_to_flow",
    "flow_census",
    "exceptional_subspaces",
    "vwma_test",
]

_MAX_BITS = 1 << 14


@dataclass(frozen=True)
class ScanConfig:
    L: tuple
    epsilon: Fraction
    height: int
    include_zero_products: bool = True
    norm: str = "euclidean"  # or "sup"

    def __post_init__(self):
        L = linalg.as_matrix(self.L)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.height < 1:
            raise ValueError("height bound must be >= 1")
        if self.norm not in ("euclidean", "sup"):
            raise ValueError("norm must be 'euclidean' or 'sup'")
        if len(L) != len(L[0]) or linalg.det(L) == 0:
            raise ValueError("L must be square and invertible")


@dataclass
class Solution:
    x: tuple
    norm: float
    shell: int
    zero_product: bool
    zero_rows: tuple = ()
    product_log: tuple | None = None  # (lo, hi) enclosure of log prod |L_i(x)|
    assigned_subspace: int | None = None

    def to_dict(self) -> dict:
        return {
            "x": list(self.x),
            "norm": self.norm,
            "zero_product": self.zero_product,
            "product_log": None if self.product_log is None else [float(self.product_log[0]), float(self.product_log[1])],
            "subspace": self.assigned_subspace,
        }


def _form_values(L, x):
    out = []
    for row in L:
        acc = Fraction(0)
        for a, b in zip(row, x):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def _norm_measure(x, norm):
    """``(base, half)``: the norm is ``base ** (1/2)`` (euclidean) or ``base`` (sup)."""
    if norm == "sup":
        return max(abs(v) for v in x), False
    return sum(v * v for v in x), True


def _abs_interval(s, bits):
    lo, hi = real_value(s, bits)
    if lo > 0:
        return lo, hi
    if hi < 0:
        return -hi, -lo
    return None


def _decide(values, base, half, eps, bits=64):
    """Return (is_solution, log-product enclosure) for nonzero form values."""
    if all(not isinstance(v, NFElem) for v in values):
        P = Fraction(1)
        for v in values:
            P *= abs(Fraction(v))
        a, b = eps.numerator, eps.denominator
        # P <= base^(-eps/2) (euclidean) or base^(-eps) (sup)
        power = 2 * b if half else b
        ok = P ** power * Fraction(base) ** a <= 1
        with mpmath.workprec(80):
            lp = mpmath.log(mpmath.mpf(P.numerator)) - mpmath.log(mpmath.mpf(P.denominator))
        return ok, _outward(lp, lp)
    while bits <= _MAX_BITS:
        ivs = [_abs_interval(v, bits) for v in values]
        if all(iv is not None for iv in ivs):
            with _iv_prec(bits + 16):
                lhs = mpmath.iv.mpf(0)
                for lo, hi in ivs:
                    lhs += mpmath.iv.log(_iv_hull(lo, hi))
                e = mpmath.iv.mpf(eps.numerator) / eps.denominator
                if half:
                    e = e / 2
                rhs = -e * mpmath.iv.log(mpmath.iv.mpf(base))
                if lhs.b <= rhs.a:
                    return True, _outward(lhs.a, lhs.b)
                if lhs.a > rhs.b:
                    return False, _outward(lhs.a, lhs.b)
        bits *= 2
    raise ArithmeticError("comparison undecided at maximal precision")


def _outward(lo, hi):
    """Float enclosure of [lo, hi] (one ulp outward covers the rounding)."""
    return math.nextafter(float(lo), -math.inf), math.nextafter(float(hi), math.inf)


@contextmanager
def _iv_prec(bits):
    old = mpmath.iv.prec
    mpmath.iv.prec = bits
    try:
        yield
    finally:
        mpmath.iv.prec = old


def _iv_hull(lo: Fraction, hi: Fraction):
    """Interval (current iv precision) enclosing [lo, hi] with outward rounding."""
    a = mpmath.iv.mpf(lo.numerator) / lo.denominator
    b = mpmath.iv.mpf(hi.numerator) / hi.denominator
    return mpmath.iv.mpf([a.a, b.b])


def _float_forms(L):
    return [[float(to_mpf(x, 64)) for x in row] for row in L]


def _certify(cfg: ScanConfig, x, bits=64):
    values = _form_values(cfg.L, x)
    zero_rows = tuple(i for i, v in enumerate(values) if v == 0)
    base, half = _norm_measure(x, cfg.norm)
    norm = math.sqrt(base) if half else float(base)
    shell = max(abs(v) for v in x)
    if zero_rows:
        if not cfg.include_zero_products:
            return None
        return Solution(tuple(x), norm, shell, True, zero_rows, None)
    ok, enc = _decide(values, base, half, cfg.epsilon, bits)
    if not ok:
        return None
    return Solution(tuple(x), norm, shell, False, (), enc)


def scan_solutions(cfg: ScanConfig) -> list:
    """All primitive solutions with sup-norm height <= N, one per sign pair, in shell order."""
    d = len(cfg.L)
    Lf = _float_forms(cfg.L)
    eps = float(cfg.epsilon)
    if cfg.norm == "sup":
        # ||x||_sup >= ||x||_2 / sqrt(d): loosen the euclidean prefilter accordingly
        Lf[0] = [v * d ** (-eps / 2) for v in Lf[0]]
    cands = kernels.scan_prefilter(Lf, int(cfg.height), eps, 2.0 ** -50)
    sols = []
    for row in cands:
        x = tuple(int(v) for v in row)
        s = _certify(cfg, x)
        if s is not None:
            sols.append(s)
    sols.sort(key=lambda s: (s.shell, s.x))
    return sols


def reverify(sol: Solution, cfg: ScanConfig) -> bool:
    """Re-decide a stored solution starting at doubled interval precision."""
    s = _certify(cfg, sol.x, bits=128)
    return s is not None


# ---------------------------------------------------------------------------


@dataclass
class Classification:
    assignments: list
    outliers: list
    max_outlier_norm: float | None

    def to_dict(self) -> dict:
        return {
            "assignments": self.assignments,
            "outliers": [list(s.x) for s in self.outliers],
            "max_outlier_norm": self.max_outlier_norm,
        }


def classify(solutions: Sequence[Solution], subspaces: Sequence[Subspace]) -> Classification:
    """Assign each solution to the first subspace containing it."""
    for V in subspaces:
        if V.is_full():
            raise ValueError("classification subspaces must be proper")
    assignments = []
    outliers = []
    for s in solutions:
        idx = next((i for i, V in enumerate(subspaces) if V.contains(s.x)), None)
        s.assigned_subspace = idx
        assignments.append(idx)
        if idx is None:
            outliers.append(s)
    mx = max((s.norm for s in outliers), default=None)
    return Classification(assignments, outliers, mx)


# ---------------------------------------------------------------------------


class SolutionTooSmall(ValueError):
    pass


class ZeroFormError(ValueError):
    pass


class NotASolution(ValueError):
    pass


def operator_bound(L) -> int:
    """Integer C >= 1 with ||L v|| <= C ||v|| (Frobenius bound, rounded up)."""
    total = Fraction(0)
    for row in L:
        for x in row:
            lo, hi = real_value(x, 32)
            m = max(abs(lo), abs(hi))
            total += m * m
    c = math.isqrt(math.ceil(total))
    if c * c < total:
        c += 1
    return max(1, c)


@dataclass
class FlowFromSolution:
    t: int
    n: tuple
    D: float
    b: tuple
    lhs: float
    rhs: float
    clamped: tuple

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


def _round_zero_sum(targets):
    """Integers near ``targets`` (which sum to ~0) with zero sum and slack <= 3/2."""
    n = [int(math.floor(v + 0.5)) for v in targets]
    excess = sum(n)
    while excess != 0:
        if excess > 0:
            # lower the coordinate that overshoots the most
            i = max(range(len(n)), key=lambda j: (n[j] - targets[j], -j))
            n[i] -= 1
            excess -= 1
        else:
            i = max(range(len(n)), key=lambda j: (targets[j] - n[j], -j))
            n[i] += 1
            excess += 1
    return n


def solution_to_flow(x, L, eps, C=None, prec: int = 256) -> FlowFromSolution:
    """Integer weights ``n`` and time ``t`` from a solution ``x``; checks ``||a_t L x|| <= d e^{-t}``."""
    L = linalg.as_matrix(L)
    eps = Fraction(eps)
    d = len(L)
    x = tuple(int(v) for v in x)
    if C is None:
        C = operator_bound(L)
    if C < 1:
        raise ValueError("C must be >= 1")
    values = _form_values(L, x)
    if any(v == 0 for v in values):
        raise ZeroFormError("some L_i(x) vanishes; handled by classification instead")
    base, _ = _norm_measure(x, "euclidean")
    ok, _ = _decide(values, base, True, eps)
    if not ok:
        raise NotASolution(f"{x} does not satisfy the product inequality for eps={eps}")
    with mpmath.workprec(prec):
        e = mpmath.mpf(eps.numerator) / eps.denominator
        logx = mpmath.log(base) / 2
        t = int(mpmath.floor(e / (4 * d) * logx))
        if t < 1:
            raise SolutionTooSmall(f"t = {t} < 1 for x = {x}")
        D = 5 * d * (mpmath.log(C) + 8 * d / e)
        ell = [mpmath.log(abs(to_mpf(v, prec))) for v in values]
        clamp = -D * t
        ellp = [max(v, clamp) for v in ell]
        mean = mpmath.fsum(ellp) / d
        b = [mean - v for v in ellp]
        n = _round_zero_sum([float(v / t) for v in b])
        for bi, ni in zip(b, n):
            if abs(bi / t - ni) > mpmath.mpf(3) / 2:
                raise ArithmeticError("rounding slack exceeded 3/2")
        norm2 = mpmath.fsum(mpmath.exp(2 * ni * t + 2 * li) for ni, li in zip(n, ell))
        lhs = mpmath.sqrt(norm2)
        rhs = d * mpmath.exp(-t)
        clamped = tuple(i for i, v in enumerate(ell) if v < clamp)
        return FlowFromSolution(t, tuple(n), float(D), tuple(float(v) for v in b), float(lhs), float(rhs), clamped)


def flow_census(flows: Iterable[FlowFromSolution]) -> set:
    return {f.n for f in flows}


# ---------------------------------------------------------------------------


def exceptional_subspaces(fam: MatrixFamily, eps, flow_catalog: Sequence[Flow],
                          extra: Iterable[Subspace] = ()) -> list:
    """Deduplicated next-to-top HN terms ``V_{h-1}`` over a catalog of unimodular flows.

    ``eps`` only selects the flow catalog upstream; it is accepted for
    interface symmetry with the scan.
    """
    extra = tuple(extra)
    out = {}
    for a in flow_catalog:
        if not a.is_unimodular():
            raise ValueError(f"flow {a!r} is not unimodular")
        filt = hn_filtration(TauOracle(fam, a), lattice_for(fam, a, extra))
        V = filt.chain[-2][0]
        if not V.is_zero():
            out.setdefault(V, None)
    return sorted(out, key=Subspace.sort_key)


def vwma_test(y: Sequence, eps, N: int) -> list:
    """All ``(p, q)`` with ``||q||_sup <= N`` and ``|p + q.y| Pi_+(q) <= Pi_+(q)^(-eps)``.

    ``Pi_+(q) = prod max(1, |q_i|)``; ``p`` is the nearest integer to
    ``-q.y``.  One representative per sign pair (first nonzero q_i > 0).
    """
    from itertools import product

    eps = Fraction(eps)
    n = len(y)
    hits = []
    for q in product(range(-N, N + 1), repeat=n):
        nz = next((v for v in q if v), 0)
        if nz <= 0:
            continue
        qy = Fraction(0)
        for qi, yi in zip(q, y):
            if qi:
                qy = qy + qi * yi
        p = _nearest_int(-qy)
        r = p + qy
        pi_plus = 1
        for qi in q:
            pi_plus *= max(1, abs(qi))
        if r == 0:
            hits.append((p, q))
            continue
        # |r| <= Pi^(-1-eps)  <=>  |r|^den * Pi^(den + num) <= 1
        ok, _ = _decide([r], pi_plus, False, 1 + eps)
        if ok:
            hits.append((p, q))
    return hits


def _nearest_int(v) -> int:
    if not isinstance(v, NFElem):
        return math.floor(Fraction(v) + Fraction(1, 2))
    bits = 32
    while True:
        lo, hi = real_value(v, bits)
        a = math.floor(lo + Fraction(1, 2))
        if a == math.floor(hi + Fraction(1, 2)):
            return a
        bits *= 2
