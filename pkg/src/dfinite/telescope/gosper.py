"""Gosper's algorithm over QQ(n, params)[k], with a linear right-hand side so that the
same solver serves Zeilberger's method."""

from __future__ import annotations

import sympy

from ..exact.linalg import nullspace
from .term import HyperTerm, _gen, shift


class Coeffs:
    """Conversion between QQ[n, k, params] polynomials and lists of coefficients in
    k over the field QQ(n, params)."""

    def __init__(self, K, k: str):
        self.K = K
        self.R = K.ring
        names = [str(s) for s in K.symbols]
        self.ki = names.index(k)
        others = [s for i, s in enumerate(names) if i != self.ki]
        self.F, *_ = sympy.field(",".join(others), sympy.QQ) if others else (None,)
        self.k = self.R.gens[self.ki]
        self._fgens = list(self.F.gens) if self.F is not None else []

    def deg(self, p) -> int:
        return p.degree(self.ki) if p else -1

    def coeffs(self, p) -> list:
        """Coefficients of p in k, lowest first, as elements of F."""
        d = self.deg(p)
        out = [self.F.zero for _ in range(d + 1)]
        for monom, c in p.terms():
            e = monom[self.ki]
            term = self.F(c)
            j = 0
            for i, m in enumerate(monom):
                if i == self.ki:
                    continue
                if m:
                    term = term * self._fgens[j] ** m
                j += 1
            out[e] = out[e] + term
        return out

    def to_K(self, a):
        """An element of F as an element of K."""
        return self.K.from_expr(a.as_expr()) if a else self.K.zero

    def poly_from(self, coeffs):
        """sum coeffs[i] k^i as an element of K."""
        kg = self.K.gens[self.ki]
        out = self.K.zero
        for i, c in enumerate(coeffs):
            if c:
                out = out + self.to_K(c) * kg ** i
        return out


def _kshift(p, C: Coeffs, h: int):
    if h == 0:
        return p
    return p.compose(C.k, C.k + h)


def dispersion_set(a, b, C: Coeffs) -> list[int]:
    """Nonnegative integers h with gcd(a(k), b(k+h)) nonconstant in k."""
    fa = [f for f, _ in a.factor_list()[1] if C.deg(f) > 0]
    fb = [g for g, _ in b.factor_list()[1] if C.deg(g) > 0]
    out = set()
    for f in fa:
        cf = C.coeffs(f)
        d = len(cf) - 1
        for g in fb:
            cg = C.coeffs(g)
            if len(cg) - 1 != d:
                continue
            h = (cf[d - 1] / cf[d] - cg[d - 1] / cg[d]) / d
            hx = h.as_expr()
            if not hx.is_Integer or hx < 0:
                continue
            h = int(hx)
            gs = _kshift(g, C, h)
            # proportional over QQ(n, params)?
            cgs = C.coeffs(gs)
            ratio = cf[d] / cgs[d]
            if all(x == ratio * y for x, y in zip(cf, cgs)):
                out.add(h)
    return sorted(out)


def gosper_form(A, B, C: Coeffs):
    """(a, b, c) with A/B = a(k)/b(k) * c(k+1)/c(k) and gcd(a(k), b(k+h)) = 1, h >= 0."""
    a, b, c = A, B, C.R.one
    for h in dispersion_set(A, B, C):
        g = a.gcd(_kshift(b, C, h))
        if C.deg(g) <= 0:
            continue
        a = a.exquo(g)
        b = b.exquo(_kshift(g, C, -h))
        for i in range(1, h + 1):
            c = c * _kshift(g, C, -i)
    return a, b, c


def degree_bound(a, b1, degc: int, C: Coeffs) -> int:
    """Bound on deg x for a(k) x(k+1) - b1(k) x(k) of degree degc."""
    da, db = C.deg(a), C.deg(b1)
    ca, cb = C.coeffs(a), C.coeffs(b1)
    if da != db or ca[-1] != cb[-1]:
        return degc - max(da, db)
    D = da
    d = degc - D + 1
    diff = [x - y for x, y in zip(ca, cb)]
    if D >= 1:
        t = (-diff[D - 1] / ca[D]).as_expr()
        if t.is_Integer and t >= 0:
            d = max(d, int(t))
    return d


def solve_gosper(a, b1, cs: list, C: Coeffs, need_nonzero=None):
    """Solutions of a(k) x(k+1) - b1(k) x(k) = sum_j lam_j cs[j](k).

    Returns (x coefficients, lam list) with the lam part nonzero, or None.
    """
    degc = max(C.deg(p) for p in cs)
    d = degree_bound(a, b1, degc, C)
    d = max(d, -1)
    F = C.F
    nx = d + 1
    nl = len(cs)
    # columns: x_0..x_d, lam_0..lam_(nl-1)
    kpow = [C.R.one]
    rows_poly = []
    for i in range(nx):
        xi = C.k ** i
        rows_poly.append(a * _kshift(xi, C, 1) - b1 * xi)
    for p in cs:
        rows_poly.append(-p)
    cols = [C.coeffs(p) for p in rows_poly]
    height = max(len(c) for c in cols) if cols else 0
    M = [[(col[r] if r < len(col) else F.zero) for col in cols] for r in range(height)]
    basis = nullspace(M, F, nx + nl)
    for v in basis:
        lam = v[nx:]
        if any(lam):
            return v[:nx], lam
    return None


def gosper(term, k: str | None = None):
    """Certificate R with Delta_k(R(k) t(k)) = t(k), or None when t has no
    hypergeometric antidifference."""
    if isinstance(term, HyperTerm):
        K, s, kname = term.K, term.s, term.k
    else:
        K, s = term
        kname = k or "k"
    C = Coeffs(K, kname)
    A, B = s.numer, s.denom
    a, b, c = gosper_form(A, B, C)
    b1 = _kshift(b, C, -1)
    sol = solve_gosper(a, b1, [c], C)
    if sol is None:
        return None
    x, lam = sol
    x = [xi / lam[0] for xi in x]
    kg = _gen(K, kname)
    X = C.poly_from(x)
    R = K(b1) * X / K(c) if x else K.zero
    # Delta_k(R t) = t  <=>  R(k+1) s(k) - R(k) = 1
    if shift(R, K, kname, 1) * s - R != K.one:
        raise AssertionError("Gosper certificate failed verification")
    return R
