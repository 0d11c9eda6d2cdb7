"""Brute-force polygon check for rational families in dimension <= 3.

Expansion rates are recomputed here from scratch with numpy integer
arithmetic: lines through ``L x`` directly, planes of Q^3 through the
normal vector ``adj(L)^T n`` (the Hodge dual of the Plücker vector).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd

import numpy as np

from ..exact import linalg
from ..exact.subspace import Subspace
from .flow import Flow, MatrixFamily
from .lattice import lattice_for
from .polygon import GraysonPolygon, grayson_polygon, hn_filtration
from .tau import TauOracle

__all__ = ["enumerate_lines_planes", "brute_tau", "verify_hn_bruteforce"]


@lru_cache(maxsize=16)
def enumerate_lines_planes(d: int, height: int):
    """Primitive line generators and (for d = 3) primitive plane normals, as int64 arrays."""
    rng = range(-height, height + 1)
    vecs = []
    for v in product(rng, repeat=d):
        nz = next((x for x in v if x), 0)
        if nz > 0 and gcd(*v) == 1:
            vecs.append(v)
    lines = np.array(vecs, dtype=np.int64).reshape(-1, d)
    normals = np.zeros((0, d), dtype=np.int64)
    if d == 3:
        n = len(lines)
        i, j = np.triu_indices(n, 1)
        cr = np.cross(lines[i], lines[j])
        g = np.gcd.reduce(np.abs(cr), axis=1)
        keep = g > 0
        cr = cr[keep] // g[keep, None]
        first = np.where(cr[:, 0] != 0, cr[:, 0], np.where(cr[:, 1] != 0, cr[:, 1], cr[:, 2]))
        cr = cr * np.sign(first)[:, None]
        normals = np.unique(cr, axis=0)
    return lines, normals


def _int_matrix(L):
    den = 1
    for r in L:
        for x in r:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return np.array([[int(Fraction(x) * den) for x in r] for r in L], dtype=object)


def brute_tau(fam: MatrixFamily, a: Flow, lines, normals):
    """tau_M on each line generator and each plane normal (numpy route)."""
    w = np.array([float(x) for x in a.weights])
    wf = [Fraction(x) for x in a.weights]
    total = sum(wf, Fraction(0))
    d = a.dim
    line_vals = None
    plane_vals = None
    for L in fam.samples:
        Li = _int_matrix(L)
        M = np.array(Li, dtype=np.int64)
        y = lines @ M.T
        lv = _max_weight(y != 0, wf)
        line_vals = lv if line_vals is None else np.maximum(line_vals, lv)
        if d == 3 and len(normals):
            adj = _adjugate3(Li)
            m = normals @ np.array(adj, dtype=np.int64)  # (adj^T n)^T = n^T adj
            comp = [total - x for x in wf]
            pv = _max_weight(m != 0, comp)
            plane_vals = pv if plane_vals is None else np.maximum(plane_vals, pv)
    return line_vals, plane_vals


def _max_weight(mask, weights):
    # weights are Fractions; compare via object arrays to stay exact
    vals = np.empty(mask.shape[0], dtype=object)
    vals[:] = None
    order = sorted(range(len(weights)), key=lambda i: -weights[i])
    undecided = np.ones(mask.shape[0], dtype=bool)
    for i in order:
        hit = undecided & mask[:, i]
        vals[hit] = weights[i]
        undecided &= ~hit
    if undecided.any():
        raise ArithmeticError("zero image vector: sample is singular")
    return vals


def _adjugate3(M):
    adj = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != j]
            cols = [c for c in range(3) if c != i]
            minor = M[rows[0]][cols[0]] * M[rows[1]][cols[1]] - M[rows[0]][cols[1]] * M[rows[1]][cols[0]]
            adj[i][j] = (-1) ** (i + j) * minor
    return adj


def _brute_tau_subspace(fam, a, V: Subspace) -> Fraction:
    d = a.dim
    if V.is_zero():
        return Fraction(0)
    if V.is_full():
        return sum(a.weights, Fraction(0))
    if V.dim == 1:
        lv, _ = brute_tau(fam, a, np.array([V.basis[0]], dtype=np.int64), np.zeros((0, d), dtype=np.int64))
        return lv[0]
    n = linalg.primitive(V.annihilator()[0])
    _, pv = brute_tau(fam, a, np.zeros((0, d), dtype=np.int64), np.array([n], dtype=np.int64))
    return pv[0]


def verify_hn_bruteforce(fam: MatrixFamily, a: Flow, height: int,
                         polygon: GraysonPolygon | None = None, filtration=None,
                         detail: bool = False):
    """Check a polygon against every rational subspace of height <= ``height``.

    Passes when no enumerated point ``(dim V, tau_M(V))`` lies below the
    polygon and every vertex is attained, either by an enumerated subspace
    or by the corresponding filtration term re-evaluated with the brute
    route.
    """
    d = a.dim
    if d > 3:
        raise ValueError("brute force is limited to d <= 3")
    if not fam.is_rational():
        raise ValueError("brute force needs a rational family")
    if polygon is None or filtration is None:
        lat = lattice_for(fam, a)
        filt = hn_filtration(TauOracle(fam, a), lat)
        if filtration is None:
            filtration = filt
        if polygon is None:
            polygon = filt.polygon()
    lines, normals = enumerate_lines_planes(d, height)
    lv, pv = brute_tau(fam, a, lines, normals)
    points = {0: {Fraction(0)}, d: {sum(a.weights, Fraction(0))}}
    points.setdefault(1, set()).update(lv.tolist())
    if pv is not None:
        points.setdefault(2, set()).update(pv.tolist())
    for V in filtration.subspaces:
        points.setdefault(V.dim, set()).add(_brute_tau_subspace(fam, a, V))
    below = []
    for k, vals in points.items():
        floor = polygon.value_at(k)
        m = min(vals)
        if m < floor:
            below.append((k, m, floor))
    missing = [(k, v) for k, v in polygon.vertices if v not in points.get(k, ())]
    ok = not below and not missing
    if detail:
        return ok, {"below": below, "missing": missing}
    return ok
