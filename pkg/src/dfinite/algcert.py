"""Differential equations for algebraic power series and for D-finite functions
composed with algebraic ones.

Everything happens in A = K(X)[Y]/(P).  With U the inverse of P_Y modulo P, the
derivative of the root is Y' = R1 = -U P_X mod P, and each further derivative is
obtained by differentiating the representative and substituting Y' = R1.
"""

from __future__ import annotations

from dataclasses import dataclass

import sympy

from .exact import Poly, QQ, RatFunc, RatFuncField
from .exact.fields import ParamField
from .exact.linalg import IncrementalDependency
from .exact.poly import poly_xgcd
from .ore import OrePoly, OreRing, normal_form, ore_apply


class NotSquarefreeError(ValueError):
    def __init__(self):
        super().__init__("take squarefree part first")


# ---------------------------------------------------------------- truncated series


def _smul(a, b, N, F):
    out = [F.zero] * min(N, len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a[:N]):
        if not x:
            continue
        for j, y in enumerate(b[:N - i]):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _sinv(a, N, F):
    """1/a mod X^N (a[0] != 0)."""
    inv0 = F.one / a[0]
    out = [inv0]
    for m in range(1, N):
        acc = F.zero
        for j in range(1, min(m, len(a) - 1) + 1):
            if a[j]:
                acc = acc + a[j] * out[m - j]
        out.append(-acc * inv0)
    return out


def _padd(a, b, F):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else F.zero) + (b[i] if i < len(b) else F.zero) for i in range(n)]


def _eval_bivariate(P: list, Y: list, N: int, F):
    """P(X, Y(X)) mod X^N by Horner in Y."""
    acc = []
    for coeff in reversed(P):
        acc = _smul(acc, Y, N, F) if acc else []
        acc = _padd(acc, list(coeff.c[:N]), F)
    return (acc + [F.zero] * N)[:N]


# ---------------------------------------------------------------- data type


@dataclass(frozen=True, eq=False)
class AlgSeries:
    """The root Y(X) of P(X, Y) whose expansion at 0 starts with ``prefix``.

    ``P`` is a list indexed by the degree in Y of polynomials in X.
    """

    P: tuple
    prefix: tuple
    var: str = "x"

    def __post_init__(self):
        P = tuple(self.P)
        while P and not P[-1]:
            P = P[:-1]
        if len(P) < 2:
            raise ValueError("P must have positive degree in Y")
        object.__setattr__(self, "P", P)
        F = self.field
        object.__setattr__(self, "prefix", tuple(F(v) for v in self.prefix))
        if not self.prefix:
            raise ValueError("a nonempty branch prefix is required")
        res = _eval_bivariate(list(P), list(self.prefix), len(self.prefix), F)
        if any(res):
            raise ValueError("branch prefix is not a root of P")

    @property
    def field(self):
        return self.P[-1].field

    @property
    def degree(self) -> int:
        return len(self.P) - 1

    def series(self, N: int) -> list:
        """Coefficients y_0..y_(N-1) of the branch, by Newton iteration."""
        F = self.field
        Y = list(self.prefix)
        if len(Y) >= N:
            return Y[:N]
        dP = [c.scale(F(j)) for j, c in enumerate(self.P)][1:]
        d0 = _eval_bivariate(dP, Y[:1], 1, F)[0]
        if not d0:
            return self._series_by_ode(N)
        prec = len(Y)
        while prec < N:
            prec = min(2 * prec, N)
            Yp = Y + [F.zero] * (prec - len(Y))
            num = _eval_bivariate(list(self.P), Yp, prec, F)
            den = _eval_bivariate(dP, Yp, prec, F)
            corr = _smul(num, _sinv(den, prec, F), prec, F)
            Y = [Yp[i] - (corr[i] if i < len(corr) else F.zero) for i in range(prec)]
        return Y[:N]

    def _series_by_ode(self, N: int) -> list:
        from .holonomic import DFiniteFunction, required_prefix

        L = alg_to_diffop(self, verify=False)
        need = required_prefix(L, 0)
        if len(self.prefix) < need:
            raise ValueError(f"singular branch: supply at least {need} prefix terms")
        f = DFiniteFunction(L, self.prefix)
        out = f.series(N)
        if any(_eval_bivariate(list(self.P), out, N, self.field)):
            raise ValueError("branch prefix does not determine a root of P")
        return out

    def to_json(self):
        F = self.field
        width = max(c.deg for c in self.P) + 1
        return {
            "variable": self.var,
            "P": [[F.to_json(c.coeff(i)) for i in range(width)] for c in self.P],
            "prefix": [F.to_json(v) for v in self.prefix],
        }

    @classmethod
    def from_json(cls, d, field=QQ):
        P = [Poly([field.from_json(v) for v in row], field) for row in d["P"]]
        return cls(tuple(P), tuple(field.from_json(v) for v in d["prefix"]), d.get("variable", "x"))


def parse_bivariate(text: str, x: str = "x", y: str = "y", params=()) -> tuple:
    """P(x, y) from text, as a tuple indexed by the degree in y."""
    base = ParamField(params) if params else QQ
    syms = {x: sympy.Symbol(x), y: sympy.Symbol(y)}
    syms.update({p: sympy.Symbol(p) for p in params})
    expr = sympy.sympify(text.replace("^", "**"), locals=syms)
    poly = sympy.Poly(sympy.expand(expr), syms[y], syms[x])
    dy = poly.degree(syms[y])
    dx = max(0, poly.degree(syms[x]))
    out = []
    for j in range(dy + 1):
        cs = []
        for i in range(dx + 1):
            c = poly.coeff_monomial(syms[y] ** j * syms[x] ** i)
            cs.append(base(sympy.sstr(c)) if params else base(str(c)))
        out.append(Poly(cs, base))
    return tuple(out)


# ---------------------------------------------------------------- the algebra K(X)[Y]/(P)


class _Algebra:
    def __init__(self, a: AlgSeries):
        base = a.field
        self.F = RatFuncField(base, a.var)
        F = self.F
        self.base = base
        self.P = Poly([RatFunc.from_poly(c) for c in a.P], F)
        self.D = a.degree
        Py = self.P.derivative()
        g, U, _ = poly_xgcd(Py, self.P)
        if g.deg > 0:
            raise NotSquarefreeError()
        Px = self.P.map_coeffs(lambda c: c.derivative())
        self.R1 = self.reduce(-(U * Px))

    def reduce(self, p: Poly) -> Poly:
        return p % self.P if p.deg >= self.D else p

    def dX(self, p: Poly) -> Poly:
        """Total derivative of p(X, Y(X))."""
        partial = p.map_coeffs(lambda c: c.derivative())
        return self.reduce(partial + self.reduce(p.derivative() * self.R1))

    def coords(self, p: Poly) -> list:
        return [p.coeff(i) for i in range(self.D)]

    def inverse(self, p: Poly) -> Poly:
        g, u, _ = poly_xgcd(p, self.P)
        if g.deg > 0:
            raise ArithmeticError("element is not invertible modulo P")
        return self.reduce(u)

    def subs_poly(self, q: Poly) -> Poly:
        """q(Y) for a polynomial q in one variable with base-field coefficients."""
        F = self.F
        acc = Poly.zero(F)
        Y = Poly([F.zero, F.one], F)
        for c in reversed(q.c):
            acc = self.reduce(acc * Y + Poly([F(RatFunc.const(c, self.base))], F))
        return acc


def _operator_from_relation(rel, F, var) -> OrePoly:
    ring = OreRing.diff(var, F.base)
    return normal_form(OrePoly(ring, list(rel)))


def _verify(L: OrePoly, series: list, what: str):
    res = ore_apply(L, series)
    if any(res):
        raise AssertionError(f"{what}: operator does not annihilate the series")


def alg_to_diffop(a: AlgSeries, verify: bool = True, terms: int = 50) -> OrePoly:
    """Linear differential operator of order <= deg_Y P annihilating the branch."""
    A = _Algebra(a)
    F = A.F
    dep = IncrementalDependency(F)
    cur = A.reduce(Poly([F.zero, F.one], F))  # Y itself
    rel = dep.add(A.coords(cur))
    while rel is None:
        cur = A.dX(cur)
        rel = dep.add(A.coords(cur))
        if len(rel or []) > A.D + 2:
            raise ArithmeticError("no relation found")
    L = _operator_from_relation(rel, F, a.var)
    if verify:
        deg = max(c.num.deg for c in L.coeffs)
        _verify(L, a.series(terms + deg + L.order + 1), "algebraic branch")
    return L


def compose_algebraic(L: OrePoly, a: AlgSeries, verify_with=None, terms: int = 50) -> OrePoly:
    """Operator annihilating F(Y(X)) for every solution F of L.

    ``verify_with`` may be a list of Taylor coefficients of the composed function,
    which is then checked against the result.
    """
    A = _Algebra(a)
    F = A.F
    L = normal_form(L)
    r = L.order
    polys = L.poly_coeffs()
    lead_inv = A.inverse(A.subs_poly(polys[-1]))
    # F^(r)(Y) = sum_k red[k] F^(k)(Y)
    red = [A.reduce(-(A.subs_poly(p) * lead_inv)) for p in polys[:-1]]

    def derive(vec):
        out = [Poly.zero(F) for _ in range(r)]
        for i, ai in enumerate(vec):
            if not ai:
                continue
            out[i] = out[i] + A.dX(ai)
            lifted = A.reduce(ai * A.R1)
            if i + 1 < r:
                out[i + 1] = out[i + 1] + lifted
            else:
                for k in range(r):
                    out[k] = out[k] + A.reduce(lifted * red[k])
        return out

    def coords(vec):
        return [c for ai in vec for c in A.coords(ai)]

    dep = IncrementalDependency(F)
    vec = [Poly.one(F)] + [Poly.zero(F) for _ in range(r - 1)]
    rel = dep.add(coords(vec))
    steps = 0
    while rel is None:
        vec = derive(vec)
        rel = dep.add(coords(vec))
        steps += 1
        if steps > r * A.D + 1:
            raise ArithmeticError("no relation found")
    ring = OreRing.diff(L.ring.var, F.base)
    M = normal_form(OrePoly(ring, list(rel)))
    if verify_with is not None:
        _verify(M, list(verify_with), "composition")
    return M
