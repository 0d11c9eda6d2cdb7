"""Exact arithmetic substrate: scalars, linear algebra, canonical subspaces."""

from .field import (
    FieldMismatchError,
    NFElem,
    NumberField,
    as_fraction,
    common_field,
    is_rational,
    real_value,
    sign,
    to_mpf,
)
from .linalg import det, inverse, kernel_basis, rank, rref, solve
from .literals import LiteralError, format_scalar, parse_scalar
from .subspace import AmbientMismatchError, Subspace, span


def kernel(m, ncols=None) -> Subspace:
    """Right kernel of ``m`` as a canonical subspace."""
    if ncols is None:
        ncols = len(m[0])
    return Subspace(ncols, kernel_basis(m, ncols))


__all__ = [
    "AmbientMismatchError",
    "FieldMismatchError",
    "LiteralError",
    "NFElem",
    "NumberField",
    "Subspace",
    "as_fraction",
    "common_field",
    "det",
    "format_scalar",
    "inverse",
    "is_rational",
    "kernel",
    "kernel_basis",
    "parse_scalar",
    "rank",
    "real_value",
    "rref",
    "sign",
    "solve",
    "span",
    "to_mpf",
]
