"""Successive minima of a real lattice with certified minimizing vectors.

The basis is rounded to an integer lattice ``B_int ~ 2^s B`` at the working
precision, reduced with exact integral LLL, and the minima are found one at
a time: the k-th minimizer is the shortest vector outside the saturated
span of the previous ones.  Each search is a Schnorr-Euchner enumeration
run by the float kernel (candidates within a relative slack, then decided
with exact integer norms) with an exact rational enumeration as fallback.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .. import kernels
from .reduction import gram_schmidt_data, integral_lll

__all__ = ["PrecisionError", "MinimaResult", "successive_minima", "unimodular_completion"]

_ETA = 1e-9
_CAP = 4096


class PrecisionError(ArithmeticError):
    """Working precision too low to order candidate norms; retry with more bits."""


@dataclass
class MinimaResult:
    minima: list  # mpf, nondecreasing
    minimizers: tuple  # integer coefficient vectors w.r.t. the input columns
    radius: list  # certified enclosure half-widths of the minima
    prec: int
    exact_fallbacks: int = 0


def _ext_gcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def unimodular_completion(u):
    """Integer matrix ``Minv`` (rows) with ``det = +-1`` whose first column is the primitive ``u``."""
    m = len(u)
    v = list(u)
    M = [[int(i == j) for j in range(m)] for i in range(m)]
    Minv = [[int(i == j) for j in range(m)] for i in range(m)]
    for i in range(1, m):
        a, b = v[0], v[i]
        if b == 0:
            continue
        g, x, y = _ext_gcd(a, b)
        if g < 0:
            g, x, y = -g, -x, -y
        ag, bg = a // g, b // g
        # E = [[x, y], [-bg, ag]] on coordinates (0, i); E^{-1} = [[ag, -y], [bg, x]]
        v[0], v[i] = g, 0
        r0, ri = M[0], M[i]
        M[0] = [x * p + y * q for p, q in zip(r0, ri)]
        M[i] = [-bg * p + ag * q for p, q in zip(r0, ri)]
        for row in Minv:
            p, q = row[0], row[i]
            row[0], row[i] = ag * p + bg * q, -y * p + x * q
    if v[0] != 1:
        if v[0] != -1:
            raise ValueError("vector is not primitive")
        for row in Minv:
            row[0] = -row[0]
    return Minv


def _to_mp_matrix(B, prec):
    rows = []
    with mpmath.workprec(prec):
        for r in B:
            row = []
            for x in r:
                if isinstance(x, Fraction):
                    row.append(mpmath.mpf(x.numerator) / x.denominator)
                else:
                    row.append(mpmath.mpf(x))
            rows.append(row)
    return rows


def _float_gs(D, lam):
    n = len(D) - 1
    bn = [Fraction(D[i + 1], D[i]) for i in range(n)]
    top = max(bn)
    shift = max(0, top.numerator.bit_length() - top.denominator.bit_length() - 900)
    scale = Fraction(1, 1 << shift) if shift else Fraction(1)
    fb = [float(x * scale) for x in bn]
    if min(fb) <= 0.0 or max(fb) / min(fb) > 2.0 ** 900:
        return None
    mu = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            mu[i][j] = float(Fraction(lam[i][j], D[j + 1]))
    return mu, fb, scale


def _exact_gs(D, lam):
    n = len(D) - 1
    bn = [Fraction(D[i + 1], D[i]) for i in range(n)]
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            mu[i][j] = Fraction(lam[i][j], D[j + 1])
    return mu, bn


def _combine(c, rows):
    out = [0] * len(rows[0])
    for ci, r in zip(c, rows):
        if ci:
            for j, x in enumerate(r):
                out[j] += ci * x
    return out


def _canon(x):
    nz = next((v for v in x if v), 0)
    return tuple(-v for v in x) if nz < 0 else tuple(x)


def _next_minimizer(bas, T, k, factor, stats, enum):
    D, lam = gram_schmidt_data(bas)
    norms = [sum(x * x for x in b) for b in bas[k:]]
    r2_exact = Fraction(min(norms)) * Fraction(factor)
    cands = None
    fl = _float_gs(D, lam)
    if fl is not None:
        mu, fb, scale = fl
        r2 = float(r2_exact * scale) * (1 + 1e-6)
        cands = enum(mu, fb, k, r2, _ETA, _CAP)
    if cands is None:
        stats["exact"] += 1
        mu, bn = _exact_gs(D, lam)
        cands = kernels.python.enum_candidates(mu, bn, k, r2_exact, 0, 10 ** 6)
        if cands is None:
            raise PrecisionError("too many tied candidates in exact enumeration")
    if not cands:
        raise PrecisionError("enumeration found no vector within the pruning radius")
    best = None
    for _, c in cands:
        v = _combine(c, bas)
        nv = sum(x * x for x in v)
        x = _canon(_combine(c, T))
        key = (nv, x)
        if best is None or key < best[0]:
            best = (key, c)
    return best[1]


def successive_minima(B, prec: int = 128, enumeration_bound_factor=1, enum=None) -> MinimaResult:
    """Euclidean successive minima of the lattice spanned by the columns of ``B``.

    ``B`` may hold mpf, float, int or Fraction entries.  Minimizers are
    integer coefficient vectors with respect to the input columns, with
    first nonzero entry positive.
    """
    if enum is None:
        enum = kernels.enum_candidates
    n = len(B)
    if any(len(r) != n for r in B):
        raise ValueError("basis matrix must be square")
    factor = Fraction(enumeration_bound_factor)
    if factor < 1:
        raise ValueError("enumeration_bound_factor must be >= 1")
    with mpmath.workprec(prec):
        Bm = _to_mp_matrix(B, prec)
        amax = max(abs(x) for r in Bm for x in r)
        if amax == 0:
            raise ValueError("singular basis")
        emax = int(mpmath.floor(mpmath.log(amax, 2))) + 1
        s = prec - emax - 4
        cols = [[int(mpmath.nint(mpmath.ldexp(Bm[i][j], s))) for i in range(n)] for j in range(n)]
    try:
        red = integral_lll(cols)
    except ValueError as exc:
        raise PrecisionError("rounded basis is singular at this precision") from exc
    bas, T = red.basis, red.transform
    stats = {"exact": 0}
    xs = []
    for k in range(n):
        c = _next_minimizer(bas, T, k, factor, stats, enum)
        xs.append(_canon(_combine(c, T)))
        tail = list(c[k:])
        g = math.gcd(*tail)
        u = [t // g for t in tail]
        Minv = unimodular_completion(u)
        m = n - k
        new_b = [_combine([Minv[i][j] for i in range(m)], bas[k:]) for j in range(m)]
        new_T = [_combine([Minv[i][j] for i in range(m)], T[k:]) for j in range(m)]
        if g == 1:
            # the minimizer itself spans the same saturation with the prefix
            new_b[0] = _combine(c, bas)
            new_T[0] = _combine(c, T)
        bas = bas[:k] + new_b
        T = T[:k] + new_T
        if k + 1 < n:
            red = integral_lll(bas, start=k + 1, transform=T)
            bas, T = red.basis, red.transform
    minima = []
    radius = []
    with mpmath.workprec(prec):
        ulp = mpmath.ldexp(1, -s)
        for x in xs:
            v = [mpmath.fsum(Bm[i][j] * x[j] for j in range(n)) for i in range(n)]
            lam_k = mpmath.sqrt(mpmath.fsum(t * t for t in v))
            minima.append(lam_k)
            radius.append(ulp * sum(abs(t) for t in x) * math.sqrt(n))
    for a, b_, ra, rb in zip(minima, minima[1:], radius, radius[1:]):
        if b_ < a - ra - rb:
            raise PrecisionError("minima out of order beyond their enclosures")
    # exact ties between consecutive minima are sorted after rounding noise
    order = sorted(range(n), key=lambda i: minima[i])
    if order != list(range(n)):
        minima = [minima[i] for i in order]
        radius = [radius[i] for i in order]
        xs = [xs[i] for i in order]
    return MinimaResult(minima, tuple(xs), radius, prec, stats["exact"])
