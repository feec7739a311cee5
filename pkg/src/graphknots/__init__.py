"""Symbolic engine for graph knots and round handle decompositions of S^3."""
from .expr import (
    Cable, GraphKit, KnotExpr, MalformedExpression, Sum, U, Unknot,
    equal_normalized, is_unknot, kit_of, level, normalize, serialize,
)
from .invariants import LaurentPoly, alexander, genus

__version__ = "0.1.0"
