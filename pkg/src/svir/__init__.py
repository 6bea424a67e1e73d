"""Exact computations in the super Virasoro algebras SVir[0] and SVir[1/2].

Scalars live in Q(i). Elements are finite combinations of L(m), G(r) and
the central element C; the centerless quotients drop C.
"""

from .scalar import Scalar, ZERO, ONE, I, parse_scalar, format_scalar, nth_roots
from .algebra import (AlgebraConfig, Element, Symbol, ConfigMismatch, SVIR0, SVIR_HALF,
                      CENTERLESS0, CENTERLESS_HALF, ALL_CONFIGS, bracket, super_jacobi_report)
from .textio import ParseError, GridMismatch, parse_element, format_element
from .linalg import Window, Matrix, Subspace, rref, solve, kernel, intersect
from .derivations import (MapTable, inner_witness, local_der_at, image_intersection,
                          normalization_pipeline, leibniz_violations)
from .automorphisms import (AutParams, apply_aut, compose, invert, fit_single, fit_pairs,
                            local_aut_decide, two_local_recover, is_automorphism_table)

__version__ = "0.1.0"

__all__ = [
    "Scalar", "ZERO", "ONE", "I", "parse_scalar", "format_scalar", "nth_roots",
    "AlgebraConfig", "Element", "Symbol", "ConfigMismatch", "SVIR0", "SVIR_HALF",
    "CENTERLESS0", "CENTERLESS_HALF", "ALL_CONFIGS", "bracket", "super_jacobi_report",
    "ParseError", "GridMismatch", "parse_element", "format_element",
    "Window", "Matrix", "Subspace", "rref", "solve", "kernel", "intersect",
    "MapTable", "inner_witness", "local_der_at", "image_intersection", "normalization_pipeline",
    "leibniz_violations",
    "AutParams", "apply_aut", "compose", "invert", "fit_single", "fit_pairs",
    "local_aut_decide", "two_local_recover", "is_automorphism_table",
]
