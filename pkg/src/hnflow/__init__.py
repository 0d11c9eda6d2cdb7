"""Slope formalism for diagonal flows on lattices, with exact and numerical verifiers."""

__version__ = "0.1.0"
