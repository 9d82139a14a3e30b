"""Exact terms, arithmetic, normal forms, and their text round-trip."""

from .numbers import (
    ExactNumber,
    Rational,
    compare_exact,
    is_square_fraction,
    rounded_sqrt_2dp,
    sqrt_square_fraction,
    surd_normalize,
)
from .terms import EqState, Equation, NormalForm, P_X, P_ZERO, Polynomial, SumExpr, Term
from .textio import parse_state, parse_sum, print_poly, print_state, print_sum

__all__ = [
    "EqState",
    "Equation",
    "ExactNumber",
    "NormalForm",
    "P_X",
    "P_ZERO",
    "Polynomial",
    "Rational",
    "SumExpr",
    "Term",
    "compare_exact",
    "is_square_fraction",
    "parse_state",
    "parse_sum",
    "print_poly",
    "print_state",
    "print_sum",
    "rounded_sqrt_2dp",
    "sqrt_square_fraction",
    "surd_normalize",
]
