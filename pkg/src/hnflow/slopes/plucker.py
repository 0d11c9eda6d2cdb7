"""Linear span of a family's images in the sum of exterior powers."""

from __future__ import annotations

from ..exact import linalg
from .flow import MatrixFamily

__all__ = ["rho", "plucker_span"]


def rho(L) -> tuple:
    """Flattened block-diagonal action of L on wedge^1, ..., wedge^d."""
    d = len(L)
    out = []
    for k in range(1, d + 1):
        for row in linalg.compound(L, k):
            out.extend(row)
    return tuple(out)


def plucker_span(fam: MatrixFamily) -> tuple:
    """``(dimension, basis rows)`` of span{rho(L) : L in samples}."""
    vecs = [rho(L) for L in fam.samples]
    red, piv = linalg.rref(vecs)
    return len(piv), red
