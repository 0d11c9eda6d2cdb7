"""Finite candidate lattices of subspaces and submodularity checks."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable

from ..exact import linalg
from ..exact.subspace import Subspace
from .flow import Flow, MatrixFamily

__all__ = [
    "CandidateLattice",
    "close_lattice",
    "flag_generators",
    "lattice_for",
    "primitive_vectors",
    "rational_subspaces",
    "random_subspace",
    "SubmodularityReport",
    "submodularity_check",
]


@dataclass(frozen=True)
class CandidateLattice:
    ambient_dim: int
    members: tuple
    saturated: bool
    rounds: int = 0

    def __contains__(self, V):
        return V in self._index

    @property
    def _index(self):
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = frozenset(self.members)
            object.__setattr__(self, "_idx", idx)
        return idx

    def __len__(self):
        return len(self.members)

    def above(self, base: Subspace) -> tuple:
        return tuple(W for W in self.members if base <= W)


def close_lattice(generators: Iterable[Subspace], max_rounds: int = 8, d: int | None = None,
                  max_members: int = 2000) -> CandidateLattice:
    """Close ``generators`` plus 0 and the full space under sums and intersections.

    Each round adds every pairwise sum and intersection of the current
    members.  ``saturated`` is False when ``max_rounds`` ran out before a
    fixpoint, or when the member count passed ``max_members`` (generic
    configurations in dimension >= 3 can generate infinite lattices).
    """
    gens = list(generators)
    if d is None:
        if not gens:
            raise ValueError("ambient dimension needed when there are no generators")
        d = gens[0].ambient_dim
    members = {Subspace.zero(d), Subspace.full(d)}
    for g in gens:
        if g.ambient_dim != d:
            raise ValueError("generators must share the ambient dimension")
        members.add(g)
    done = set()
    rounds = 0
    saturated = False
    while True:
        current = sorted(members, key=Subspace.sort_key)
        new = set()
        for U, V in combinations(current, 2):
            key = (U, V)
            if key in done:
                continue
            done.add(key)
            if U <= V or V <= U:
                continue
            for W in (U + V, U & V):
                if W not in members:
                    new.add(W)
        if not new:
            saturated = True
            break
        if rounds >= max_rounds:
            break
        rounds += 1
        members |= new
        if len(members) > max_members:
            break
    return CandidateLattice(d, tuple(sorted(members, key=Subspace.sort_key)), saturated, rounds)


def flag_generators(fam: MatrixFamily, a: Flow, rational_only: bool = True) -> list:
    """Generator recipe: ``L^{-1} <e_j : j among the k lowest weights>`` for each sample and k.

    Candidates must be rational subspaces, so for number-field samples the
    irrational flag terms are dropped unless ``rational_only`` is False.
    """
    order = a.descending_order()
    d = a.dim
    out = []
    for L in fam.samples:
        Linv = linalg.inverse(L)
        for k in range(1, d):
            coords = order[d - k:]
            V = Subspace.coordinate(d, coords).image(Linv)
            if V.is_rational() or not rational_only:
                out.append(V)
    return out


def lattice_for(fam: MatrixFamily, a: Flow, extra: Iterable[Subspace] = (), max_rounds: int = 8) -> CandidateLattice:
    """Closed candidate lattice from the flag recipe plus user-supplied subspaces."""
    gens = flag_generators(fam, a) + list(extra)
    return close_lattice(gens, max_rounds, d=fam.dim)


# ---------------------------------------------------------------------------
# enumeration of low-height rational subspaces


def primitive_vectors(d: int, height: int) -> list:
    """Primitive integer vectors in ``[-height, height]^d``, first nonzero entry positive."""
    out = []
    for v in product(range(-height, height + 1), repeat=d):
        nz = next((x for x in v if x != 0), 0)
        if nz <= 0:
            continue
        if math.gcd(*v) == 1:
            out.append(v)
    return out


def rational_subspaces(d: int, height: int, dims: Iterable[int] | None = None) -> list:
    """Subspaces spanned by primitive vectors of height <= ``height``.

    Lines come from primitive vectors and hyperplanes from normals of
    (d-1)-tuples of them; intermediate dimensions use tuples of spanning
    vectors directly, which is only practical for tiny ``d`` and height.
    """
    wanted = set(range(1, d + 1)) if dims is None else set(dims)
    vecs = primitive_vectors(d, height)
    out = set()
    if 1 in wanted and d >= 1:
        out.update(Subspace(d, [v], _canonical=False) for v in vecs)
    if d in wanted:
        out.add(Subspace.full(d))
    if d >= 3 and (d - 1) in wanted:
        normals = set()
        for combo in combinations(vecs, d - 1):
            n = _generalized_cross(combo)
            if any(n):
                normals.add(_canonical_sign(linalg.primitive(n)))
        for n in normals:
            out.add(Subspace(d, linalg.kernel_basis([n], d)))
    for k in range(2, d - 1):
        if k in wanted:
            for combo in combinations(vecs, k):
                V = Subspace(d, combo)
                if V.dim == k:
                    out.add(V)
    return sorted(out, key=Subspace.sort_key)


def _generalized_cross(vectors):
    d = len(vectors[0])
    n = []
    for j in range(d):
        cols = [c for c in range(d) if c != j]
        m = [[v[c] for c in cols] for v in vectors]
        n.append((-1) ** j * linalg.int_det(m))
    return n


def _canonical_sign(v):
    nz = next((x for x in v if x != 0), 0)
    return tuple(-x for x in v) if nz < 0 else tuple(v)


def random_subspace(rng: random.Random, d: int, k: int | None = None, bound: int = 3) -> Subspace:
    """Random rational subspace spanned by ``k`` random integer vectors."""
    if k is None:
        k = rng.randint(0, d)
    while True:
        rows = [[rng.randint(-bound, bound) for _ in range(d)] for _ in range(k)]
        V = Subspace(d, rows)
        if V.dim == k:
            return V


# ---------------------------------------------------------------------------


@dataclass
class SubmodularityReport:
    pairs_checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def submodularity_check(oracle, lattice: CandidateLattice | None = None, trials: int = 100,
                        seed: int = 0, d: int | None = None, pairs=None) -> SubmodularityReport:
    """Exact test of ``phi(U) + phi(V) >= phi(U cap V) + phi(U + V)``.

    Pairs come from ``pairs`` if given, else all member pairs of
    ``lattice``, else ``trials`` random rational pairs in dimension ``d``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if pairs is None:
        if lattice is not None:
            pairs = list(combinations(lattice.members, 2))
        else:
            if d is None:
                d = oracle.dim
            rng = random.Random(seed)
            pairs = [(random_subspace(rng, d), random_subspace(rng, d)) for _ in range(trials)]
    report = SubmodularityReport()
    for U, V in pairs:
        lhs = oracle(U) + oracle(V)
        rhs = oracle(U & V) + oracle(U + V)
        report.pairs_checked += 1
        if lhs < rhs:
            report.violations.append((U, V, lhs, rhs))
    return report
