"""Exact arithmetic: rationals, Gaussian rationals, polynomials, rational functions."""

from .fields import QQ, QQI, ParamField, RationalField, GaussianField, field_for, join_fields
from .gaussrat import GaussRat, I
from .poly import (Poly, poly_shift, poly_xgcd, poly_gcd, poly_lcm, resultant,
                   squarefree_decomposition, squarefree_part)
from .ratfunc import RatFunc, RatFuncField, ratfunc_normalize
from .linalg import IncrementalDependency, nullspace, rref, solve

__all__ = [
    "QQ", "QQI", "ParamField", "RationalField", "GaussianField", "field_for", "join_fields",
    "GaussRat", "I", "Poly", "poly_shift", "poly_xgcd", "poly_gcd", "poly_lcm", "resultant",
    "squarefree_decomposition", "squarefree_part", "RatFunc", "RatFuncField",
    "ratfunc_normalize", "IncrementalDependency", "nullspace", "rref", "solve",
]
