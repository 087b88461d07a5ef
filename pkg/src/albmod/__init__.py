"""Moduli of rational maps from P^1 to commutative algebraic groups over finite fields.

Witt vectors, the Artin-Hasse exponential, the pole filtrations of local
Witt groups, the modulus of a rational map, ray class groups versus
relative Chow groups of P^1, and desk-scale class field theory checks.
"""
from .curve import Divisor
from .errors import AlbmodError, BudgetError, CapError, DomainError, ParseError, PrecisionError
from .fields import GF, FiniteField
from .places import Place
from .poly import Poly
from .ratfun import RatFun
from .witt import WittVector

__version__ = "0.1.0"

__all__ = [
    "AlbmodError",
    "BudgetError",
    "CapError",
    "Divisor",
    "DomainError",
    "FiniteField",
    "GF",
    "ParseError",
    "Place",
    "Poly",
    "PrecisionError",
    "RatFun",
    "WittVector",
]
