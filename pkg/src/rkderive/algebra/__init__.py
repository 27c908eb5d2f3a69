"""Exact polynomial algebra over Q: polynomials, ideals, rational functions."""

from .poly import GREVLEX, GRLEX, LEX, ORDERS, MonomialOrder, MultiPoly, RingMismatchError, VarTable
from .groebner import (
    buchberger,
    divide,
    in_ideal,
    interreduce,
    is_groebner,
    poly_reduce,
    reduced_groebner,
    s_polynomial,
    same_ideal,
)
from .ratfunc import RationalFunction, exact_quotient, substitute
from .factor import poly_sqrt, rational_roots, split_factors
from .linsolve import (
    InconsistentSystemError,
    LinearSystemError,
    NonlinearSystemError,
    UnderdeterminedSystemError,
    is_linear_in,
    linear_solve,
)
from .textform import ParseError, format_poly, format_rational, parse_poly, parse_polys

__all__ = [
    "GREVLEX", "GRLEX", "LEX", "ORDERS", "MonomialOrder", "MultiPoly", "RingMismatchError", "VarTable",
    "buchberger", "divide", "in_ideal", "interreduce", "is_groebner", "poly_reduce",
    "reduced_groebner", "s_polynomial", "same_ideal", "RationalFunction", "exact_quotient", "substitute",
    "InconsistentSystemError", "LinearSystemError", "NonlinearSystemError",
    "UnderdeterminedSystemError", "is_linear_in", "linear_solve", "ParseError",
    "format_poly", "format_rational", "parse_poly", "parse_polys", "poly_sqrt", "rational_roots", "split_factors",
]
