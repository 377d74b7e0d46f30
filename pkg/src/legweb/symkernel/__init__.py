"""Exact rational arithmetic, sparse polynomials and small-system elimination."""
from .poly import (
    ONE_POLY,
    ZERO,
    CyclicBindings,
    ExponentOverflow,
    Inhomogeneous,
    MissingWeight,
    Poly,
    check_acyclic,
    collect,
    homogeneous_parts,
    substitute,
    var,
    weight_of,
)
from .parse import ParseError, parse_poly
from .symbols import REGISTRY, Origin, Symbol, SymbolError, symbol

P = parse_poly

__all__ = [
    "ONE_POLY", "ZERO", "CyclicBindings", "ExponentOverflow", "Inhomogeneous",
    "MissingWeight", "Origin", "P", "ParseError", "Poly", "REGISTRY", "Symbol",
    "SymbolError", "check_acyclic", "collect", "homogeneous_parts", "parse_poly",
    "substitute", "symbol", "var", "weight_of",
]
