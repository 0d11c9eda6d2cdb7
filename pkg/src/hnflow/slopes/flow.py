"""Weight vectors of diagonal flows and finite matrix families."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..exact import linalg
from ..exact.field import common_field

__all__ = ["Flow", "MatrixFamily"]


class Flow:
    """Rational weights ``(A_1, ..., A_d)`` of ``a_t = diag(e^{A_1 t}, ..., e^{A_d t})``."""

    __slots__ = ("weights",)

    def __init__(self, weights: Sequence):
        w = tuple(Fraction(x) for x in weights)
        if not w:
            raise ValueError("a flow needs at least one weight")
        self.weights = w

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def is_unimodular(self) -> bool:
        return self.total == 0

    def is_constant(self) -> bool:
        return len(set(self.weights)) == 1

    def descending_order(self) -> tuple:
        """0-based indices sorted by weight, largest first (stable on ties)."""
        return tuple(sorted(range(self.dim), key=lambda i: (-self.weights[i], i)))

    def __eq__(self, other):
        return isinstance(other, Flow) and self.weights == other.weights

    def __hash__(self):
        return hash(self.weights)

    def __repr__(self):
        return "Flow(" + ", ".join(str(w) for w in self.weights) + ")"

    def to_list(self) -> list:
        return [str(w) for w in self.weights]


@dataclass(frozen=True)
class MatrixFamily:
    """Finite sample family standing in for a matrix set M."""

    samples: tuple
    label: str = ""
    dim: int = field(init=False)

    def __post_init__(self):
        samples = tuple(linalg.as_matrix(m) for m in self.samples)
        if not samples:
            raise ValueError("a matrix family needs at least one sample")
        d = len(samples[0])
        for m in samples:
            if len(m) != d or any(len(r) != d for r in m):
                raise ValueError("family samples must all be d x d")
            if linalg.det(m) == 0:
                raise ValueError("family samples must be invertible")
        common_field(x for m in samples for r in m for x in r)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "dim", d)

    @classmethod
    def single(cls, m, label: str = "") -> "MatrixFamily":
        return cls((m,), label)

    @classmethod
    def identity(cls, d: int) -> "MatrixFamily":
        return cls((linalg.identity(d),), "identity")

    def is_rational(self) -> bool:
        return all(common_field(r) is None for m in self.samples for r in m)
