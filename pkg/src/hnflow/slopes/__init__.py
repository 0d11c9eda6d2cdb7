"""Expansion rates, candidate lattices, Grayson polygons and HN filtrations."""

from .bruteforce import verify_hn_bruteforce
from .census import CensusResult, flow_sweep, ordered_bell
from .flow import Flow, MatrixFamily
from .lattice import (
    CandidateLattice,
    SubmodularityReport,
    close_lattice,
    flag_generators,
    lattice_for,
    primitive_vectors,
    random_subspace,
    rational_subspaces,
    submodularity_check,
)
from .plucker import plucker_span, rho
from .polygon import (
    GraysonPolygon,
    HNError,
    HNFiltration,
    SubmodularityError,
    UnsaturatedLatticeError,
    VertexConflictError,
    grayson_polygon,
    hn_filtration,
    is_semistable,
    lower_hull,
    slopes_to_lambda,
)
from .tau import TableOracle, TauOracle, tau_family, tau_pivot, tau_single

__all__ = [
    "CandidateLattice",
    "CensusResult",
    "Flow",
    "GraysonPolygon",
    "HNError",
    "HNFiltration",
    "MatrixFamily",
    "SubmodularityError",
    "SubmodularityReport",
    "TableOracle",
    "TauOracle",
    "UnsaturatedLatticeError",
    "VertexConflictError",
    "close_lattice",
    "flag_generators",
    "flow_sweep",
    "grayson_polygon",
    "hn_filtration",
    "is_semistable",
    "lattice_for",
    "lower_hull",
    "ordered_bell",
    "plucker_span",
    "primitive_vectors",
    "random_subspace",
    "rational_subspaces",
    "rho",
    "slopes_to_lambda",
    "submodularity_check",
    "tau_family",
    "tau_pivot",
    "tau_single",
    "verify_hn_bruteforce",
]
