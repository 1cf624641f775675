"""Gröbner bases and degree-bounded ideal membership for tractable CSP ideals."""

from .poly import GRLEX, LEX, MonomialOrder, Polynomial, divide, parse_poly, s_polynomial

__all__ = ["GRLEX", "LEX", "MonomialOrder", "Polynomial", "divide", "parse_poly", "s_polynomial"]
__version__ = "0.1.0"
