"""Successive minima of flowed lattices and empirical checks of the slope predictions."""

from .minima import MinimaResult, PrecisionError, successive_minima, unimodular_completion
from .reduction import LLLResult, gram_schmidt_data, integral_lll
from .simulate import (
    CaptureVerdict,
    SimConfig,
    Snapshot,
    SnapshotSeries,
    capture_report,
    chain_lambda,
    estimate_slopes,
    flowed_basis,
    minkowski_check,
    minkowski_constant,
    simulate,
    trivial_prediction,
    working_precision,
)

__all__ = [
    "CaptureVerdict",
    "LLLResult",
    "MinimaResult",
    "PrecisionError",
    "SimConfig",
    "Snapshot",
    "SnapshotSeries",
    "capture_report",
    "chain_lambda",
    "estimate_slopes",
    "flowed_basis",
    "gram_schmidt_data",
    "integral_lll",
    "minkowski_check",
    "minkowski_constant",
    "simulate",
    "successive_minima",
    "trivial_prediction",
    "unimodular_completion",
]
