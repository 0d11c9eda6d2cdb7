"""Exact dense linear algebra over Q or a single number field.

Matrices are tuples of row tuples.  Entries may be ``int``, ``Fraction`` or
:class:`~hnflow.exact.field.NFElem`; results use ``Fraction`` wherever an
entry is rational so rational and number-field inputs compare equal.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .field import NFElem, common_field, simplify

__all__ = [
    "Matrix",
    "as_matrix",
    "identity",
    "transpose",
    "matmul",
    "matvec",
    "rref",
    "rank",
    "det",
    "inverse",
    "solve",
    "kernel_basis",
    "minor",
    "int_det",
    "int_rank",
    "integer_kernel",
    "primitive",
    "is_integral",
    "clear_denominators",
]

Matrix = tuple


def _norm(x):
    if isinstance(x, NFElem):
        return simplify(x)
    if isinstance(x, int):
        return Fraction(x)
    return x


def as_matrix(rows) -> Matrix:
    """Normalize a row list to a tuple-of-tuples with exact entries."""
    out = tuple(tuple(_norm(x) if not isinstance(x, Fraction) else x for x in r) for r in rows)
    if out:
        n = len(out[0])
        if any(len(r) != n for r in out):
            raise ValueError("ragged matrix")
    common_field(x for r in out for x in r)
    return out


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def transpose(m) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a, b) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(_norm(_dot(r, c)) for c in bt) for r in a)


def _dot(r, c):
    acc = 0
    for x, y in zip(r, c):
        if x and y:
            acc = acc + x * y
    return acc


def matvec(m, v) -> tuple:
    return tuple(_norm(_dot(r, v)) for r in m)


def rref(m) -> tuple:
    """Reduced row-echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows and
    ``pivots`` lists their pivot columns; ``len(pivots)`` is the rank.
    """
    rows = [list(r) for r in m]
    if not rows:
        return (), ()
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c] if isinstance(rows[r][c], NFElem) else Fraction(1) / rows[r][c]
        rows[r] = [x * inv if x else x for x in rows[r]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    out = tuple(tuple(_norm(x) for x in rows[i]) for i in range(r))
    return out, tuple(pivots)


def rank(m) -> int:
    return len(rref(m)[1])


def det(m):
    """Exact determinant by fraction-carrying elimination."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in m):
        raise ValueError("det of a non-square matrix")
    rows = [list(r) for r in m]
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            result = -result
        p = rows[c][c]
        result = result * p
        for i in range(c + 1, n):
            f = rows[i][c]
            if f != 0:
                q = f / p
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[c])]
    return _norm(result)


def inverse(m) -> Matrix:
    n = len(m)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, piv = rref(aug)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(r[n:]) for r in red)


def solve(m, b) -> tuple:
    """One solution ``x`` of ``m x = b``; raises ValueError if inconsistent."""
    ncols = len(m[0]) if m else 0
    aug = [list(r) + [bi] for r, bi in zip(m, b)]
    red, piv = rref(aug)
    if piv and piv[-1] == ncols:
        raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * ncols
    for row, p in zip(red, piv):
        x[p] = row[ncols]
    return tuple(_norm(v) for v in x)


def kernel_basis(m, ncols: int | None = None) -> Matrix:
    """Basis (as rows) of the right kernel ``{x : m x = 0}``."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    red, piv = rref(m) if m else ((), ())
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = _norm(-row[f])
        basis.append(tuple(v))
    return tuple(basis)


def minor(m, rows_idx, cols_idx):
    return det([[m[i][j] for j in cols_idx] for i in rows_idx])


# ---------------------------------------------------------------------------
# integer helpers


def is_integral(v) -> bool:
    return all(not isinstance(x, NFElem) and Fraction(x).denominator == 1 for x in v)


def clear_denominators(v) -> tuple:
    """Scale a rational vector to integers (no gcd removal)."""
    fr = [Fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in fr)) if fr else 1
    return tuple(int(x * den) for x in fr)


def primitive(v) -> tuple:
    """Primitive integer vector on the same ray as the rational vector ``v``."""
    iv = clear_denominators(v)
    g = math.gcd(*iv)
    if g == 0:
        return iv
    return tuple(x // g for x in iv)


def int_det(m) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def int_rank(m) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    a = [list(map(int, r)) for r in m]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, len(a)):
            f = a[i][c]
            if f:
                a[i] = [x * p - f * y for x, y in zip(a[i], a[r])]
                g = math.gcd(*a[i])
                if g > 1:
                    a[i] = [x // g for x in a[i]]
        r += 1
        if r == len(a):
            break
    return r


def _ext_gcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def integer_kernel(m, ncols: int | None = None) -> tuple:
    """Basis of the integer lattice ``{x in Z^n : m x = 0}`` for integer ``m``.

    Column-style Hermite reduction with a tracked unimodular transform; the
    columns of the transform beyond the rank span the kernel lattice.
    """
    a = [list(map(int, r)) for r in m]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # columns of u
    col = 0
    for row in a:
        if col >= ncols:
            break
        for j in range(col + 1, ncols):
            if row[j] == 0:
                continue
            x, y = row[col], row[j]
            g, s, t = _ext_gcd(x, y)
            if g < 0:
                g, s, t = -g, -s, -t
            xg, yg = x // g, y // g
            # [c_col, c_j] <- [s c_col + t c_j, -yg c_col + xg c_j]
            for r2 in a:
                p, q = r2[col], r2[j]
                r2[col], r2[j] = s * p + t * q, -yg * p + xg * q
            for r2 in u:
                p, q = r2[col], r2[j]
                r2[col], r2[j] = s * p + t * q, -yg * p + xg * q
        if row[col] != 0:
            col += 1
    basis = []
    for j in range(col, ncols):
        basis.append(tuple(u[i][j] for i in range(ncols)))
    return tuple(basis)


def compound(m, k: int) -> Matrix:
    """k-th compound matrix: all k x k minors, index sets in lexicographic order."""
    n = len(m)
    idx = list(combinations(range(n), k))
    return tuple(tuple(minor(m, r, c) for c in idx) for r in idx)
