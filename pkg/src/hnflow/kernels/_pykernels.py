"""Reference implementations of the hot loops (pure Python / numpy)."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

BACKEND = "python"


def enum_candidates(mu, bnorm2, head, radius2, eta, cap):
    """Schnorr-Euchner enumeration of the shortest vectors outside a prefix sublattice.

    ``mu[j][k]`` (j > k) are Gram-Schmidt coefficients and ``bnorm2[k]`` the
    squared Gram-Schmidt norms of a basis ``b_0..b_{n-1}``.  Returns
    ``(norm2, c)`` pairs for the coefficient vectors ``c`` with ``c[head:]``
    nonzero, top nonzero entry positive, and squared norm within a factor
    ``1 + eta`` of the minimum (which must be <= ``radius2``), sorted.
    Works with floats or exact Fractions (use ``eta=0``).  Returns ``None``
    when more than ``cap`` candidates survive or a float center leaves the
    exactly representable integer range.
    """
    n = len(bnorm2)
    exact = not isinstance(bnorm2[0], float)
    c = [0] * n
    c0 = [0] * n
    jump = [0] * n
    sgn = [1] * n
    center = [0] * n
    partial = [0] * (n + 1)
    zero_above = [True] * (n + 1)
    R2 = radius2
    found = []
    k = n - 1
    c[k] = 0 if k > head else 1
    while True:
        diff = c[k] - center[k]
        p = partial[k + 1] + diff * diff * bnorm2[k]
        if p <= R2:
            if k > 0:
                partial[k] = p
                zero_above[k] = zero_above[k + 1] and c[k] == 0
                k -= 1
                if zero_above[k + 1]:
                    center[k] = 0
                    c[k] = 0 if k > head else 1
                else:
                    s = 0
                    for j in range(k + 1, n):
                        if c[j]:
                            s -= c[j] * mu[j][k]
                    if not exact and abs(s) > 2.0 ** 50:
                        return None
                    center[k] = s
                    ci = math.floor(s + _HALF) if exact else math.floor(s + 0.5)
                    c[k] = c0[k] = ci
                    jump[k] = 0
                    sgn[k] = 1 if s >= ci else -1
                continue
            found.append((p, tuple(c)))
            if p * (1 + eta) < R2:
                R2 = p * (1 + eta)
            if len(found) > 4 * cap + 16:
                found = [f for f in found if f[0] <= R2]
                if len(found) > cap:
                    return None
        else:
            k += 1
            if k == n:
                break
        # next value at level k
        if zero_above[k + 1]:
            c[k] += 1
        else:
            jump[k] += 1
            j = jump[k]
            c[k] = c0[k] + sgn[k] * ((j + 1) // 2) * (1 if j % 2 else -1)
    found = [f for f in found if f[0] <= R2]
    if not found:
        return []
    limit = min(f[0] for f in found) * (1 + eta)
    out = sorted(f for f in found if f[0] <= limit)
    if len(out) > cap:
        return None
    return out


_HALF = Fraction(1, 2)


def scan_prefilter(Lf, N, eps, slack):
    """Half-space box points of ``[-N, N]^d`` that may satisfy the product inequality.

    ``Lf`` is a float approximation of the forms with entrywise relative
    error ``slack``; the returned candidates are a superset of the exact
    solutions among primitive vectors.
    """
    Lf = np.asarray(Lf, dtype=np.float64)
    d = Lf.shape[0]
    out = []
    absL = np.abs(Lf)
    rel = slack + 4 * d * 2.0 ** -52
    if d == 1:
        return np.array([[1]], dtype=np.int64)
    rest = np.array(np.meshgrid(*[np.arange(-N, N + 1)] * (d - 1), indexing="ij"), dtype=np.int64)
    rest = rest.reshape(d - 1, -1).T
    for x0 in range(0, N + 1):
        if x0 == 0:
            # first nonzero of the rest must be positive
            nzf = np.argmax(rest != 0, axis=1)
            lead = rest[np.arange(len(rest)), nzf]
            pts = rest[lead > 0]
            pts = np.hstack([np.zeros((len(pts), 1), dtype=np.int64), pts])
        else:
            pts = np.hstack([np.full((len(rest), 1), x0, dtype=np.int64), rest])
        xf = pts.astype(np.float64)
        v = xf @ Lf.T
        e = (np.abs(xf) @ absL.T) * rel
        lo = np.maximum(np.abs(v) - e, 0.0)
        prod = np.prod(lo, axis=1)
        n2 = np.sum(xf * xf, axis=1)
        rhs = np.power(n2, -eps / 2.0) * (1 + 1e-9)
        keep = prod <= rhs
        if keep.any():
            hit = pts[keep]
            hit = hit[np.gcd.reduce(hit, axis=1) == 1]
            if len(hit):
                out.append(hit)
    if not out:
        return np.zeros((0, d), dtype=np.int64)
    return np.vstack(out)
