"""Exact computations with fundamental modules of quantum affine algebras of
types A and C: crystals, modules over Q(q_s), normalized R-matrices and their
denominators, and verification drivers for cyclicity of tensor products."""

__version__ = "0.1.0"

from .rootdata import AffineType

__all__ = ["AffineType", "__version__"]
