"""Creative telescoping for hypergeometric single sums."""

from .gosper import dispersion_set, gosper, gosper_form
from .term import HyperTerm, parse_summand, term_field, term_from_expr
from .zeil import TelescopingResult, brute_sum, definite_sum, verify_certificate, zeilberger

__all__ = [
    "HyperTerm", "TelescopingResult", "brute_sum", "definite_sum", "dispersion_set", "gosper",
    "gosper_form", "parse_summand", "term_field", "term_from_expr", "verify_certificate",
    "zeilberger",
]
