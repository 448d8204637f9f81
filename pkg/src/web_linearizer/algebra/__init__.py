"""Coefficient algebra, jet polynomials and univariate polynomials in s."""

from .jetpoly import (
    JetPoly, derive, eliminate_s21, eliminate_squares, is_homogeneous, normalize, weight_of,
)
from .qpoly import QPoly, Root, gcd, radical_at_point, resultant, roots, squarefree
from .ralg import RAlg
from .spoly import SPoly, det3, det4

__all__ = [
    "JetPoly", "derive", "eliminate_s21", "eliminate_squares", "is_homogeneous", "normalize", "weight_of",
    "QPoly", "Root", "gcd", "radical_at_point", "resultant", "roots", "squarefree",
    "RAlg", "SPoly", "det3", "det4",
]
