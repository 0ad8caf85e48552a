"""Linear differential equations and recurrences as a data structure for special
functions and combinatorial sequences."""

from .exact import GaussRat, Poly, QQ, QQI, RatFunc
from .ore import OreFraction, OrePoly, OreRing, normal_form, ore_gcrd, ore_lclm, ore_rdivmod
from .holonomic import DFiniteFunction, PRecSequence, prove_equal, rec_prove_equal
from .convert import chebyshev_morphism, rec_to_diffop, taylor_morphism
from .cli.parse import parse_operator

__all__ = [
    "GaussRat", "Poly", "QQ", "QQI", "RatFunc", "OreFraction", "OrePoly", "OreRing",
    "normal_form", "ore_gcrd", "ore_lclm", "ore_rdivmod", "DFiniteFunction", "PRecSequence",
    "prove_equal", "rec_prove_equal", "chebyshev_morphism", "rec_to_diffop", "taylor_morphism",
    "parse_operator",
]
