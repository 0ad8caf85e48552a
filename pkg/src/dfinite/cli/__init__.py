"""Command-line interface, parsing and serialization."""

from .parse import ParseError, parse_operator, parse_poly, parse_ratfunc, parse_scalar

__all__ = ["ParseError", "parse_operator", "parse_poly", "parse_ratfunc", "parse_scalar"]
