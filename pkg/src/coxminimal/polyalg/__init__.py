"""Polynomials, monomial orders, Gröbner bases and ideal operations."""

from .ideal import (
    Ideal,
    add,
    eliminate,
    groebner_basis,
    homogenize,
    homogenize_poly,
    intersect,
    map_to,
    product,
    quotient,
    quotient_variable,
    ring_map_kernel,
    saturate,
    substitute_ideal,
)
from .order import MonomialOrder
from .poly import GradedPoly, PolySyntaxError, Ring

__all__ = [
    "GradedPoly",
    "Ideal",
    "MonomialOrder",
    "PolySyntaxError",
    "Ring",
    "add",
    "eliminate",
    "groebner_basis",
    "homogenize",
    "homogenize_poly",
    "intersect",
    "map_to",
    "product",
    "quotient",
    "quotient_variable",
    "ring_map_kernel",
    "saturate",
    "substitute_ideal",
]
