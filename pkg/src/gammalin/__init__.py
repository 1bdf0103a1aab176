"""Exact and numerical tools for linearizing x^n + y^n = z^n with matrix coefficients."""

from .exactnum import Cyclotomic, Rational, zeta
from .linearize import certify_solution, constraint_system, counting_compatibility
from .linmat import ExactMatrix, build_gamma_triple, clock_shift, evaluate
from .ncalg import NCPoly, RelationSet, expand_power, grade, perm_sum, reduce

__all__ = [
    "Cyclotomic",
    "ExactMatrix",
    "NCPoly",
    "Rational",
    "RelationSet",
    "build_gamma_triple",
    "certify_solution",
    "clock_shift",
    "constraint_system",
    "evaluate",
    "expand_power",
    "grade",
    "counting_compatibility",
    "perm_sum",
    "reduce",
    "zeta",
]

__version__ = "0.1.0"
