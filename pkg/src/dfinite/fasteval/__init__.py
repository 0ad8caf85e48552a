"""Fast exact and certified numeric evaluation."""

from .enclosure import Enclosure, certified_digits
from .nth import companion_factorial, nth_term
from .pi import chudnovsky_pi, chudnovsky_terms, pi_digits
from .series import (
    EvalRequest,
    LocalRec,
    PathError,
    StepTooLarge,
    bit_burst_path,
    continue_analytic,
    eval_dfinite,
    series_step,
    taylor_enclosures,
)
from .tree import GInt, MatFactorial, as_rational_matrix, product_range, product_tree

__all__ = [
    "Enclosure", "certified_digits", "EvalRequest", "GInt", "LocalRec", "MatFactorial", "PathError",
    "StepTooLarge", "as_rational_matrix", "bit_burst_path", "chudnovsky_pi",
    "chudnovsky_terms", "companion_factorial", "continue_analytic", "eval_dfinite",
    "nth_term", "pi_digits", "product_range", "product_tree", "series_step",
    "taylor_enclosures",
]
