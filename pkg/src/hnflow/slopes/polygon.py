"""Grayson polygons and Harder-Narasimhan filtrations over a candidate lattice."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ..exact.subspace import Subspace
from .lattice import CandidateLattice, submodularity_check

__all__ = [
    "GraysonPolygon",
    "HNFiltration",
    "HNError",
    "UnsaturatedLatticeError",
    "SubmodularityError",
    "VertexConflictError",
    "lower_hull",
    "grayson_polygon",
    "hn_filtration",
    "is_semistable",
    "slopes_to_lambda",
]


class HNError(ValueError):
    pass


class UnsaturatedLatticeError(HNError):
    pass


class SubmodularityError(HNError):
    def __init__(self, violations):
        self.violations = violations
        U, V, lhs, rhs = violations[0]
        super().__init__(f"submodularity fails on {U!r}, {V!r}: {lhs} < {rhs}")


class VertexConflictError(HNError):
    pass


@dataclass(frozen=True)
class GraysonPolygon:
    vertices: tuple  # ((dim, value), ...)

    def __post_init__(self):
        vs = tuple((int(k), Fraction(v)) for k, v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if len(vs) < 1 or vs[0] != (0, 0):
            raise ValueError("polygon must start at (0, 0)")
        for (k0, _), (k1, _) in zip(vs, vs[1:]):
            if k1 <= k0:
                raise ValueError("polygon dimensions must increase strictly")
        sl = self.slopes
        if any(b <= a for a, b in zip(sl, sl[1:])):
            raise ValueError("polygon slopes must increase strictly")

    @property
    def dim(self) -> int:
        return self.vertices[-1][0]

    @property
    def slopes(self) -> tuple:
        return tuple(
            (v1 - v0) / (k1 - k0) for (k0, v0), (k1, v1) in zip(self.vertices, self.vertices[1:])
        )

    def value_at(self, k) -> Fraction:
        """Piecewise-linear interpolation at ``k`` in [0, dim]."""
        k = Fraction(k)
        for (k0, v0), (k1, v1) in zip(self.vertices, self.vertices[1:]):
            if k0 <= k <= k1:
                return v0 + (v1 - v0) * (k - k0) / (k1 - k0)
        if len(self.vertices) == 1 and k == 0:
            return Fraction(0)
        raise ValueError(f"{k} outside the polygon's range")

    def to_dict(self) -> dict:
        return {
            "vertices": [[k, str(v)] for k, v in self.vertices],
            "slopes": [str(s) for s in self.slopes],
        }


def lower_hull(points) -> tuple:
    """Lower convex hull of (dim, value) points, collinear points dropped."""
    best = {}
    for k, v in points:
        v = Fraction(v)
        if k not in best or v < best[k]:
            best[k] = v
    pts = sorted(best.items())
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly below the chord to p
            if (y1 - y0) * (p[0] - x0) >= (p[1] - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append(p)
    return tuple(hull)


def grayson_polygon(oracle, lattice: CandidateLattice) -> GraysonPolygon:
    d = lattice.ambient_dim
    if Subspace.zero(d) not in lattice or Subspace.full(d) not in lattice:
        raise ValueError("lattice must contain 0 and the full space")
    pts = [(V.dim, oracle(V)) for V in lattice.members]
    pts.append((0, Fraction(0)))
    return GraysonPolygon(lower_hull(pts))


@dataclass(frozen=True)
class HNFiltration:
    chain: tuple  # ((Subspace, value), ...) starting at the base, ending at full space
    slopes: tuple

    @property
    def length(self) -> int:
        return len(self.chain) - 1

    @property
    def subspaces(self) -> tuple:
        return tuple(V for V, _ in self.chain)

    @property
    def interior(self) -> tuple:
        """Proper nonzero (relative to the base) terms of the chain."""
        return tuple(V for V, _ in self.chain[1:-1])

    def polygon(self) -> GraysonPolygon:
        base_dim = self.chain[0][0].dim
        base_val = self.chain[0][1]
        return GraysonPolygon(tuple((V.dim - base_dim, val - base_val) for V, val in self.chain))

    def to_dict(self) -> dict:
        return {
            "chain": [{"dim": V.dim, "value": str(val), "basis": V.to_lists()} for V, val in self.chain],
            "slopes": [str(s) for s in self.slopes],
        }


def hn_filtration(oracle, lattice: CandidateLattice, base: Subspace | None = None,
                  check_submodular: bool = True) -> HNFiltration:
    """HN filtration of ``oracle`` on ``lattice`` (optionally of the quotient by ``base``).

    Each step takes the sum of all members minimizing the slope
    ``(phi(W) - phi(V_i)) / (dim W - dim V_i)`` over members strictly above
    ``V_i``.
    """
    d = lattice.ambient_dim
    if not lattice.saturated:
        raise UnsaturatedLatticeError("candidate lattice is not closed under sum and intersection")
    if base is None:
        base = Subspace.zero(d)
    if base not in lattice:
        raise ValueError("base subspace must be a lattice member")
    members = lattice.above(base)
    if check_submodular:
        pairs = [(U, V) for U, V in combinations(members, 2) if not (U <= V or V <= U)]
        rep = submodularity_check(oracle, pairs=pairs)
        if not rep.ok:
            raise SubmodularityError(rep.violations)
    values = {W: oracle(W) for W in members}
    chain = [(base, values[base])]
    slopes = []
    current = base
    while not current.is_full():
        cv = values[current]
        best = None
        minimizers = []
        for W in members:
            if W.dim <= current.dim or not current <= W:
                continue
            s = (values[W] - cv) / (W.dim - current.dim)
            if best is None or s < best:
                best, minimizers = s, [W]
            elif s == best:
                minimizers.append(W)
        nxt = minimizers[0]
        for W in minimizers[1:]:
            nxt = nxt + W
        if nxt not in values:
            raise UnsaturatedLatticeError("sum of minimizers left the lattice")
        if (values[nxt] - cv) / (nxt.dim - current.dim) != best:
            raise SubmodularityError([(minimizers[0], minimizers[-1], values[nxt], best)])
        chain.append((nxt, values[nxt]))
        slopes.append(best)
        current = nxt
    filt = HNFiltration(tuple(chain), tuple(slopes))
    # vertex uniqueness: no other member shares a vertex's (dim, value)
    for V, val in chain:
        for W in members:
            if W != V and W.dim == V.dim and values[W] == val:
                raise VertexConflictError(f"{W!r} and {V!r} share vertex ({V.dim}, {val})")
    # coherence with the polygon of the same lattice above the base
    pts = [(W.dim - base.dim, values[W] - values[base]) for W in members]
    hull = lower_hull(pts)
    if hull != filt.polygon().vertices:
        raise HNError("filtration does not match the Grayson polygon")
    return filt


def is_semistable(oracle, lattice: CandidateLattice) -> bool:
    return hn_filtration(oracle, lattice).length == 1


def slopes_to_lambda(p: GraysonPolygon) -> list:
    """Expand segment slopes to one exponent per dimension."""
    out = []
    for (k0, _), (k1, _), s in zip(p.vertices, p.vertices[1:], p.slopes):
        out.extend([s] * (k1 - k0))
    return out
