"""Canonical subspaces of K^d for K = Q or a number field.

A :class:`Subspace` stores a canonical basis, so structural equality is
subspace equality.  Over Q the basis is the reduced row-echelon form with
each row rescaled to a primitive integer vector (pivot entry positive); over
a number field it is the plain reduced row-echelon form.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import linalg
from .field import NFElem, common_field, simplify

__all__ = ["Subspace", "span", "AmbientMismatchError"]


class AmbientMismatchError(ValueError):
    pass


def _canonical_rows(red):
    if all(not isinstance(x, NFElem) for r in red for x in r):
        return tuple(tuple(linalg.primitive(r)) for r in red), None
    field = common_field(x for r in red for x in r)
    return tuple(tuple(simplify(x) if isinstance(x, NFElem) else Fraction(x) for x in r) for r in red), field


class Subspace:
    """Immutable subspace of ``K^ambient_dim`` with a canonical basis."""

    __slots__ = ("ambient_dim", "basis", "field", "_hash")

    def __init__(self, ambient_dim: int, rows: Iterable[Sequence] = (), *, _canonical=False):
        self.ambient_dim = int(ambient_dim)
        if _canonical:
            basis = tuple(tuple(r) for r in rows)
            field = common_field(x for r in basis for x in r)
        else:
            rows = [tuple(r) for r in rows]
            for r in rows:
                if len(r) != self.ambient_dim:
                    raise AmbientMismatchError(
                        f"vector of length {len(r)} in ambient dimension {self.ambient_dim}"
                    )
            red, _ = linalg.rref(rows) if rows else ((), ())
            basis, field = _canonical_rows(red)
        self.basis = basis
        self.field = field
        self._hash = None

    # construction -----------------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls(d, (), _canonical=True)

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(d, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)), _canonical=True)

    @classmethod
    def coordinate(cls, d: int, indices: Iterable[int]) -> "Subspace":
        """Span of the standard vectors ``e_i`` for 0-based ``indices``."""
        idx = sorted(set(indices))
        return cls(d, tuple(tuple(int(j == i) for j in range(d)) for i in idx), _canonical=True)

    # basic queries ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_rational(self) -> bool:
        return self.field is None

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.ambient_dim, self.basis)))
        return self._hash

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(str(x) for x in r) + ")" for r in self.basis)
        return f"Subspace(d={self.ambient_dim}, [{rows}])"

    def sort_key(self):
        """Deterministic ordering key (dimension first, then basis text)."""
        return (self.dim, tuple(tuple(str(x) for x in r) for r in self.basis))

    def to_lists(self) -> list:
        """Basis rows as plain lists (ints for rational subspaces, strings otherwise)."""
        if self.is_rational():
            return [list(r) for r in self.basis]
        return [[str(x) for x in r] for r in self.basis]

    # lattice operations -----------------------------------------------------

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatchError("subspaces live in different ambient spaces")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.is_zero() or self.is_full():
            return self
        if self.is_zero() or other.is_full():
            return other
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def annihilator(self) -> tuple:
        """Rows spanning the linear forms that vanish on this subspace."""
        if self.is_zero():
            return Subspace.full(self.ambient_dim).basis
        return linalg.kernel_basis(self.basis, self.ambient_dim)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.is_zero() or other.is_full():
            return self
        if other.is_zero() or self.is_full():
            return other
        ann = self.annihilator() + other.annihilator()
        return Subspace(self.ambient_dim, linalg.kernel_basis(ann, self.ambient_dim))

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        if self.dim > other.dim:
            return False
        return all(other.contains(v) for v in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def contains(self, x: Sequence) -> bool:
        """Exact membership test for a vector (integer, rational or field entries)."""
        if len(x) != self.ambient_dim:
            raise AmbientMismatchError("vector length does not match ambient dimension")
        if all(v == 0 for v in x):
            return True
        if self.is_zero():
            return False
        if self.is_full():
            return True
        for form in self.annihilator_cached():
            acc = 0
            for a, b in zip(form, x):
                if a and b:
                    acc = acc + a * b
            if acc != 0:
                return False
        return True

    def annihilator_cached(self):
        cache = _ANN_CACHE.get(self)
        if cache is None:
            cache = self.annihilator()
            if len(_ANN_CACHE) > 50000:
                _ANN_CACHE.clear()
            _ANN_CACHE[self] = cache
        return cache

    def image(self, m) -> "Subspace":
        """``m . V`` for a square matrix ``m`` acting on column vectors."""
        rows = [linalg.matvec(m, v) for v in self.basis]
        return Subspace(len(m), rows)

    def wedge_coords(self) -> tuple:
        """Plücker coordinates of the canonical basis, index sets in lex order."""
        if self.is_zero():
            raise ValueError("the zero subspace has no Plücker coordinates")
        k = self.dim
        out = []
        for cols in combinations(range(self.ambient_dim), k):
            out.append(linalg.minor(self.basis, range(k), cols))
        return tuple(out)

    def lattice_basis(self) -> tuple:
        """Z-basis of ``V cap Z^d`` for a rational subspace."""
        if not self.is_rational():
            raise ValueError("integer points are only defined for rational subspaces")
        if self.is_zero():
            return ()
        ann = [linalg.primitive(r) for r in self.annihilator()]
        if not ann:
            return Subspace.full(self.ambient_dim).basis
        return linalg.integer_kernel(ann, self.ambient_dim)


_ANN_CACHE: dict = {}


def span(vectors: Iterable[Sequence], d: int | None = None) -> Subspace:
    vectors = [tuple(v) for v in vectors]
    if d is None:
        if not vectors:
            raise ValueError("ambient dimension needed for an empty span")
        d = len(vectors[0])
    return Subspace(d, vectors)
