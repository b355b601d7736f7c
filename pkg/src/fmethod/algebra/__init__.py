"""Exact arithmetic: rationals, sparse polynomials, rational functions, matrices."""

from .matrix import ExactMatrix, nullspace, rank, solve_rational
from .mpoly import MPoly, monomials_of_degree, monomials_up_to, poly_gcd, poly_lcm, primitive_normalize
from .parse import parse_polynomial
from .ratfunc import RatFunc, specialize
from .rational import BigRat, format_rat, parse_rat

__all__ = [
    "BigRat", "ExactMatrix", "MPoly", "RatFunc", "format_rat", "monomials_of_degree",
    "monomials_up_to", "nullspace", "parse_polynomial", "parse_rat", "poly_gcd", "poly_lcm",
    "primitive_normalize", "rank", "solve_rational", "specialize",
]
