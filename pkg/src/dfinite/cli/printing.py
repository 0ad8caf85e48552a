"""Human-readable rendering of polynomials, rational functions and operators."""

from __future__ import annotations

import re

import sympy

from ..exact import Poly, RatFunc


def poly_to_sympy(p: Poly, var: str):
    x = sympy.Symbol(var)
    F = p.field
    return sum((F.to_sympy(a) * x ** i for i, a in enumerate(p.c) if a), sympy.Integer(0))


def ratfunc_to_sympy(r: RatFunc, var: str):
    return poly_to_sympy(r.num, var) / poly_to_sympy(r.den, var)


def _expr_str(e) -> str:
    return sympy.sstr(e, order="lex").replace("**", "^").replace(" ", "")


def _needs_parens(s: str) -> bool:
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and i > 0:
            return True
    return False


def _single_group(s: str) -> bool:
    """True for a bare symbol/number or one parenthesized group with optional power."""
    if re.fullmatch(r"[A-Za-z_0-9]+(\^\d+)?", s):
        return True
    if not s.startswith("("):
        return False
    depth = 0
    for i, ch in enumerate(s):
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0:
            return re.fullmatch(r"(\^\d+)?", s[i + 1:]) is not None
    return False


def _factor_product(expr) -> str:
    """Print a polynomial expression as constant times parenthesized factors."""
    if expr == 0:
        return "0"
    gens = sorted(expr.free_symbols, key=lambda s: s.name)
    if not gens:
        return _expr_str(expr)
    const, factors = sympy.factor_list(sympy.expand(expr), *gens)
    pieces = []
    bare = []
    factors = sorted(factors, key=lambda fe: (sympy.Poly(fe[0], *gens).total_degree(),
                                              _expr_str(fe[0])))
    for f, e in factors:
        s = _expr_str(f)
        if _needs_parens(s) or s.startswith("-"):
            piece = f"({s})"
            if e > 1:
                piece += f"^{e}"
            pieces.append(piece)
        else:
            bare.append(s if e == 1 else f"{s}^{e}")
    body = "".join(pieces)
    bare.sort()
    if bare:
        body = "*".join(bare) + ("*" + body if body else "")
    c = _expr_str(const)
    if c == "1":
        return body
    if c == "-1":
        return "-" + body
    if body.startswith("("):
        return f"{c}{body}" if "/" not in c else f"({c})*{body}"
    return f"{c}*{body}" if "/" not in c else f"({c})*{body}"


def format_coeff(r: RatFunc, var: str) -> str:
    num = poly_to_sympy(r.num, var)
    den = poly_to_sympy(r.den, var)
    n = _factor_product(num)
    if r.den.deg <= 0 and den == 1:
        return n
    d = _factor_product(den)
    nn = n if not _needs_parens(n) else f"({n})"
    if not _single_group(d):
        d = f"({d})"
    return f"{nn}/{d}"


def format_poly(p: Poly, var: str) -> str:
    return _factor_product(poly_to_sympy(p, var))


def _gen_power(gen: str, k: int, shift: bool) -> str:
    if k == 0:
        return ""
    if k < 0:
        name = f"{gen}_inv"
        return name if k == -1 else f"{name}^{-k}"
    return gen if k == 1 else f"{gen}^{k}"


def format_operator(P) -> str:
    """Render an operator as ``coef*GEN^k`` terms in decreasing powers."""
    R = P.ring
    if not P.coeffs:
        return "0"
    out = []
    for power, c in sorted(P.terms(), key=lambda t: -t[0]):
        cs = format_coeff(c, R.var)
        g = _gen_power(R.gen, power, R.is_shift())
        neg = cs.startswith("-") and not _needs_parens(cs[1:])
        if neg:
            cs = cs[1:]
        if not g:
            term = cs if not _needs_parens(cs) else f"({cs})"
        elif cs == "1":
            term = g
        else:
            term = (f"({cs})" if _needs_parens(cs) else cs) + "*" + g
        if not out:
            out.append(("-" if neg else "") + term)
        else:
            out.append((" - " if neg else " + ") + term)
    return "".join(out)
