"""Hypergeometric terms given by their two shift quotients, and the summand language.

A summand is a product of powers of ``binomial(a, b)``, ``factorial(a)``, ``C^a``,
``(-1)^a`` and rational functions, where every argument is affine in the variables
with integer coefficients.  Shift quotients are derived factor by factor without
any simplification heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import sympy
from sympy import QQ

from ..cli.parse import ParseError


def term_field(n: str = "n", k: str = "k", params=()):
    """The field QQ(n, k, params) used for shift quotients."""
    names = [n, k] + [p for p in params if p not in (n, k)]
    K, *_ = sympy.field(",".join(names), QQ)
    return K


def _gen(K, name):
    return K.gens[[str(s) for s in K.symbols].index(name)]


def shift(f, K, var: str, h: int):
    """f with var replaced by var + h."""
    if h == 0:
        return f
    g = K.ring.gens[[str(s) for s in K.symbols].index(var)]
    return f.new(f.numer.compose(g, g + h), f.denom.compose(g, g + h))


@dataclass(frozen=True, eq=False)
class HyperTerm:
    """Term t(n, k) with r = t(n+1,k)/t(n,k) and s = t(n,k+1)/t(n,k)."""

    r: object
    s: object
    K: object
    n: str = "n"
    k: str = "k"
    expr: object = None  # sympy expression, when known, for exact evaluation
    check: bool = dc_field(default=True, repr=False)

    def __post_init__(self):
        if not self.s or not self.r:
            raise ValueError("malformed quotient (zero)")
        if self.check and not self.compatible():
            raise ValueError("shift quotients are not compatible")

    @property
    def params(self):
        return tuple(str(s) for s in self.K.symbols[2:])

    def compatible(self) -> bool:
        """r(n,k+1) s(n,k) == s(n+1,k) r(n,k)."""
        lhs = shift(self.r, self.K, self.k, 1) * self.s
        rhs = shift(self.s, self.K, self.n, 1) * self.r
        return lhs == rhs

    def gen(self, name):
        return _gen(self.K, name)

    def value(self, n0: int, k0: int):
        """Exact value t(n0, k0) (needs the defining expression)."""
        if self.expr is None:
            raise ValueError("term has no closed form for evaluation")
        v = self.expr.subs({sympy.Symbol(self.n): n0, sympy.Symbol(self.k): k0})
        v = sympy.nsimplify(v) if v.is_Float else v
        if v.has(sympy.zoo, sympy.nan, sympy.oo):
            raise ZeroDivisionError(f"term undefined at n={n0}, k={k0}")
        return v

    def __str__(self):
        return str(self.expr) if self.expr is not None else f"HyperTerm(r={self.r}, s={self.s})"


# ---------------------------------------------------------------- summand compiler


def _affine_step(arg, var) -> int:
    """Integer m with arg(var + 1) = arg(var) + m."""
    v = sympy.Symbol(var)
    d = sympy.expand(arg.subs(v, v + 1) - arg)
    if not d.is_Integer:
        raise ValueError(f"argument {arg} is not affine with integer slope in {var}")
    return int(d)


def _factorial_quotient(arg, var, K):
    """factorial(arg(var+1)) / factorial(arg(var)) as a field element."""
    m = _affine_step(arg, var)
    u = K.from_expr(sympy.expand(arg))
    out = K.one
    if m > 0:
        for i in range(1, m + 1):
            out = out * (u + i)
    elif m < 0:
        for i in range(0, -m):
            out = out / (u - i)
    return out


def _quotient(e, var, K):
    if e.is_Number:
        if e.is_zero:
            raise ValueError("the zero factor is not a hypergeometric term")
        return K.one
    if e.is_Symbol:
        if str(e) in [str(s) for s in K.symbols]:
            f = K.from_expr(e)
            return shift(f, K, var, 1) / f
        raise ValueError(f"unknown symbol {e}")
    if e.is_Mul:
        out = K.one
        for a in e.args:
            out = out * _quotient(a, var, K)
        return out
    if e.is_Pow:
        base, ex = e.args
        if ex.is_Integer:
            q = _quotient(base, var, K)
            return q ** int(ex)
        # constant base with affine exponent
        if base.free_symbols & {sympy.Symbol(var)}:
            raise ValueError(f"unsupported power {e}")
        m = _affine_step(ex, var)
        if base.is_zero:
            raise ValueError(f"zero base in {e} is not a hypergeometric term")
        return K.from_expr(base) ** m
    if isinstance(e, sympy.binomial):
        a, b = e.args
        return (_factorial_quotient(a, var, K)
                / (_factorial_quotient(b, var, K) * _factorial_quotient(a - b, var, K)))
    if isinstance(e, sympy.factorial):
        return _factorial_quotient(e.args[0], var, K)
    if e.is_Add:
        f = K.from_expr(e)
        return shift(f, K, var, 1) / f
    raise ValueError(f"unsupported factor {e}")


_LOCALS = {"binomial": sympy.binomial, "factorial": sympy.factorial, "binom": sympy.binomial}


def parse_summand(text: str, n: str = "n", k: str = "k", params=()) -> HyperTerm:
    """Compile a summand such as ``binomial(n,k)^2*binomial(n+k,k)^2``."""
    names = {n: sympy.Symbol(n), k: sympy.Symbol(k)}
    names.update({p: sympy.Symbol(p) for p in params})
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={**_LOCALS, **names})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ParseError(f"cannot parse summand: {exc}", 0, text) from None
    extra = {str(s) for s in expr.free_symbols} - {n, k} - set(params)
    if extra:
        raise ParseError(f"unknown symbol {sorted(extra)[0]}", text.find(sorted(extra)[0]), text)
    return term_from_expr(expr, n, k, params)


def term_from_expr(expr, n: str = "n", k: str = "k", params=()) -> HyperTerm:
    K = term_field(n, k, params)
    r = _quotient(expr, n, K)
    s = _quotient(expr, k, K)
    return HyperTerm(r, s, K, n, k, expr)
