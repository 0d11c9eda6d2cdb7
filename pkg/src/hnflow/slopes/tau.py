"""Expansion rates of subspaces under a diagonal flow.

Two independent routes are provided.  :func:`tau_single` scans Plücker
coordinates of ``L.V`` in order of decreasing weight sum; :func:`tau_pivot`
reads the jump indices of ``dim(W cap F_i)`` off an echelon form after
sorting the weights.  They must agree on every input.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from itertools import combinations

from ..exact import linalg
from ..exact.field import NFElem
from ..exact.subspace import Subspace
from .flow import Flow, MatrixFamily

__all__ = [
    "tau_single",
    "tau_pivot",
    "tau_family",
    "TauOracle",
    "TableOracle",
    "transformed_rows",
]


def transformed_rows(L, V: Subspace) -> list:
    """Rows spanning ``L.V`` (L acts on column vectors)."""
    return [linalg.matvec(L, v) for v in V.basis]


def _integer_rows(rows):
    if any(isinstance(x, NFElem) for r in rows for x in r):
        return None
    return [linalg.clear_denominators(r) for r in rows]


def _index_sets_by_weight(weights, k):
    sets = list(combinations(range(len(weights)), k))
    sets.sort(key=lambda I: -sum(weights[i] for i in I))
    return sets


def tau_single(L, V: Subspace, a: Flow) -> Fraction:
    """Largest weight sum over index sets carrying a nonzero Plücker coordinate of ``L.V``."""
    if V.ambient_dim != a.dim or len(L) != a.dim:
        raise ValueError("dimension mismatch between matrix, subspace and flow")
    k = V.dim
    if k == 0:
        return Fraction(0)
    rows = transformed_rows(L, V)
    irows = _integer_rows(rows)
    for I in _index_sets_by_weight(a.weights, k):
        if irows is not None:
            nonzero = linalg.int_det([[r[j] for j in I] for r in irows]) != 0
        else:
            nonzero = linalg.minor(rows, range(k), I) != 0
        if nonzero:
            return sum((a.weights[i] for i in I), Fraction(0))
    raise ArithmeticError("all Plücker coordinates vanish; L is singular on V")


def tau_pivot(L, V: Subspace, a: Flow) -> Fraction:
    """Weight sum over the jumps of ``i -> dim(L.V cap F_i)`` in the descending-weight frame."""
    if V.ambient_dim != a.dim or len(L) != a.dim:
        raise ValueError("dimension mismatch between matrix, subspace and flow")
    k = V.dim
    if k == 0:
        return Fraction(0)
    order = a.descending_order()
    rows = [[r[j] for j in order] for r in transformed_rows(L, V)]
    d = a.dim
    # dim(W cap F_i) = k - rank of the first i-1 columns
    inter = []
    for i in range(d + 1):
        prefix = [r[:i] for r in rows]
        inter.append(k - (linalg.rank(prefix) if i else 0))
    total = Fraction(0)
    for i in range(d):
        if inter[i] > inter[i + 1]:
            total += a.weights[order[i]]
    return total


def tau_family(fam: MatrixFamily, V: Subspace, a: Flow) -> Fraction:
    if V.ambient_dim != fam.dim:
        raise ValueError("subspace and family live in different dimensions")
    return max(tau_single(L, V, a) for L in fam.samples)


class TauOracle:
    """Submodular function ``V -> tau_M(V)`` for a sample family and a flow (memoized)."""

    def __init__(self, fam: MatrixFamily, a: Flow):
        if fam.dim != a.dim:
            raise ValueError("family and flow dimensions differ")
        self.family = fam
        self.flow = a
        self.dim = fam.dim
        self._cache = {}
        self._lock = threading.Lock()

    def __call__(self, V: Subspace) -> Fraction:
        v = self._cache.get(V)
        if v is None:
            v = tau_family(self.family, V, self.flow)
            with self._lock:
                self._cache[V] = v
        return v


class TableOracle:
    """Explicit finite table ``Subspace -> Rat``; the zero subspace maps to 0."""

    def __init__(self, d: int, table=None, default=None):
        self.dim = d
        self.table = dict(table or {})
        self.default = default

    def __call__(self, V: Subspace) -> Fraction:
        if V.is_zero():
            return Fraction(0)
        if V in self.table:
            return Fraction(self.table[V])
        if self.default is None:
            raise KeyError(f"no table value for {V!r}")
        return Fraction(self.default(V)) if callable(self.default) else Fraction(self.default)
