"""Exact integral LLL reduction with a tracked unimodular transform.

The integer Gram-Schmidt data follow the classical integral variant: for a
basis b_1..b_n we keep ``D[i] = det Gram(b_1..b_i)`` and
``lam[i][j] = D[j] * mu_ij``, both integers, so every step is exact.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["integral_lll", "gram_schmidt_data", "LLLResult"]


class LLLResult:
    """Reduced basis (list of integer vectors), transform and integer GS data."""

    __slots__ = ("basis", "transform", "D", "lam")

    def __init__(self, basis, transform, D, lam):
        self.basis = basis
        self.transform = transform
        self.D = D
        self.lam = lam

    def bnorm2(self):
        """Exact squared Gram-Schmidt norms as Fractions."""
        return [Fraction(self.D[i + 1], self.D[i]) for i in range(len(self.basis))]

    def mu(self):
        n = len(self.basis)
        out = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            out[i][i] = Fraction(1)
            for j in range(i):
                out[i][j] = Fraction(self.lam[i][j], self.D[j + 1])
        return out


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def gram_schmidt_data(basis):
    """Integer GS data ``(D, lam)`` of linearly independent integer vectors."""
    n = len(basis)
    D = [1] + [0] * n
    lam = [[0] * n for _ in range(n)]
    for k in range(n):
        for j in range(k + 1):
            u = _dot(basis[k], basis[j])
            for i in range(j):
                u = (D[i + 1] * u - lam[k][i] * lam[j][i]) // D[i]
            if j < k:
                lam[k][j] = u
            else:
                D[k + 1] = u
        if D[k + 1] == 0:
            raise ValueError("basis vectors are linearly dependent")
    return D, lam


def integral_lll(basis, delta: Fraction = Fraction(99, 100), start: int = 0, transform=None) -> LLLResult:
    """LLL-reduce integer vectors ``basis`` (a list of rows).

    Only positions ``>= start`` take part in swaps, so the first ``start``
    vectors keep spanning the same sublattice; size reduction still runs
    against every earlier vector.  ``transform`` (rows) is updated alongside.
    """
    b = [list(map(int, v)) for v in basis]
    n = len(b)
    if transform is None:
        H = [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        H = [list(map(int, r)) for r in transform]
    D, lam = gram_schmidt_data(b)
    dn, dd = delta.numerator, delta.denominator

    def red(k, l):
        # size-reduce b_k against b_l
        Dl = D[l + 1]
        if 2 * abs(lam[k][l]) > Dl:
            q = (2 * lam[k][l] + Dl) // (2 * Dl)
            bk, bl = b[k], b[l]
            for i in range(len(bk)):
                bk[i] -= q * bl[i]
            hk, hl = H[k], H[l]
            for i in range(len(hk)):
                hk[i] -= q * hl[i]
            lam[k][l] -= q * Dl
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        H[k], H[k - 1] = H[k - 1], H[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lmb = lam[k][k - 1]
        Bv = (D[k - 1] * D[k + 1] + lmb * lmb) // D[k]
        for i in range(k + 1, n):
            t = lam[i][k]
            lam[i][k] = (D[k + 1] * lam[i][k - 1] - lmb * t) // D[k]
            lam[i][k - 1] = (Bv * t + lmb * lam[i][k]) // D[k + 1]
        D[k] = Bv

    k = max(start, 1)
    while k < n:
        red(k, k - 1)
        # Lovasz: D_k D_{k-2} >= delta D_{k-1}^2 - lam^2 (1-based); here shifted by one
        lhs = dd * D[k + 1] * D[k - 1]
        rhs = dn * D[k] * D[k] - dd * lam[k][k - 1] ** 2
        if lhs < rhs and k - 1 >= start:
            swap(k)
            k = max(start, k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return LLLResult(b, H, D, lam)
