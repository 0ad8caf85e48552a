"""Exact rational roots and factor lists of univariate polynomials."""

from __future__ import annotations

import sympy
from gmpy2 import mpq

from .fields import ParamField
from .poly import Poly, poly_gcd


def _to_sympy_poly(p: Poly, var="_t"):
    t = sympy.Symbol(var)
    F = p.field
    expr = sum((F.to_sympy(a) * t ** i for i, a in enumerate(p.c) if a), sympy.Integer(0))
    gens = [t] + [sympy.Symbol(s) for s in F.params]
    return sympy.Poly(expr, *gens), t


def factor_over_q(p: Poly):
    """Irreducible factors over QQ (or QQ(params)) as (Poly, multiplicity)."""
    F = p.field
    if p.deg <= 0:
        return []
    if F.is_complex:
        # split into a real polynomial when possible
        re = Poly([a.re for a in p.c])
        im = Poly([a.im for a in p.c])
        if im.is_zero():
            return [(q.map_coeffs(F, F), e) for q, e in factor_over_q(re)]
        raise NotImplementedError("factorization over QQ(i)")
    sp, t = _to_sympy_poly(p)
    _, facs = sp.factor_list()
    out = []
    for f, e in facs:
        if f.degree(t) <= 0:
            continue
        coeffs = sympy.Poly(f.as_expr(), t).all_coeffs()[::-1]
        out.append((Poly([F(sympy.sympify(c)) if isinstance(F, ParamField) else F(_q(c))
                          for c in coeffs], F).monic(), e))
    return out


def _q(c):
    c = sympy.Rational(c)
    return mpq(int(c.p), int(c.q))


def rational_roots(p: Poly):
    """Roots of p lying in the base field QQ (parameter-free), with multiplicity."""
    F = p.field
    if p.deg <= 0:
        return []
    if F.is_complex:
        re = Poly([a.re for a in p.c])
        im = Poly([a.im for a in p.c])
        g = re if im.is_zero() else (poly_gcd(re, im) if not re.is_zero() else im)
        if im.is_zero():
            g = re
        return rational_roots(g)
    out = []
    for q, e in factor_over_q(p):
        if q.deg == 1:
            r = -q.c[0] / q.c[1]
            if isinstance(F, ParamField):
                if r.numer.is_ground and r.denom.is_ground:
                    out.append((mpq(r.numer.LC) / mpq(r.denom.LC), e))
            else:
                out.append((mpq(r), e))
    return sorted(out)


def integer_roots(p: Poly):
    return sorted(int(r) for r, _ in rational_roots(p) if r.denominator == 1)


def max_nonneg_integer_root(p: Poly):
    roots = [r for r in integer_roots(p) if r >= 0]
    return max(roots) if roots else None
