"""Skew (Ore) polynomials over rational-function fields."""

from .ring import DIFF, SHIFT, OreRing, OrePoly, clear_laurent, normal_form, ore_apply, ore_mul
from .euclid import (XGCRD, lclm_cofactors, ore_gcld, ore_gcrd, ore_lclm, ore_ldivmod,
                     ore_rdivmod, ore_xgcrd, right_divides)
from .fraction import OreFraction, frac_add, frac_equal, frac_mul, frac_numerator

__all__ = [
    "DIFF", "SHIFT", "OreRing", "OrePoly", "clear_laurent", "normal_form", "ore_apply",
    "ore_mul", "XGCRD", "lclm_cofactors", "ore_gcld", "ore_gcrd", "ore_lclm", "ore_ldivmod",
    "ore_rdivmod", "ore_xgcrd", "right_divides", "OreFraction", "frac_add", "frac_equal",
    "frac_mul", "frac_numerator",
]
