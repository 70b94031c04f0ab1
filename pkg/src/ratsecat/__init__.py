"""Exact rational homotopy computations: graded-commutative algebras,
Sullivan models, derivations, relative models and sectional category."""

__version__ = "0.1.0"
