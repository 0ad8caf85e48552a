"""Local analysis: indicial polynomials, point classification, dominant singularities,
and translation of singular behaviour into coefficient asymptotics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy
from gmpy2 import isqrt, mpq, mpz

from .exact import GaussRat, Poly, QQ, QQI, RatFunc, poly_gcd, squarefree_decomposition
from .exact.roots import factor_over_q, rational_roots
from .holonomic import translate_diffop
from .ore import OrePoly, OreRing, normal_form

INF = "inf"


def _falling(field, i: int) -> Poly:
    """s(s-1)...(s-i+1)."""
    p = Poly.one(field)
    for t in range(i):
        p = p * Poly([field(-t), field.one], field)
    return p


def _indicial_at_zero(L: OrePoly) -> tuple[Poly, int]:
    polys = normal_form(L).poly_coeffs()
    F = L.ring.base
    v = None
    for i, p in enumerate(polys):
        for k, a in enumerate(p.c):
            if a and (v is None or k - i < v):
                v = k - i
    out = Poly.zero(F)
    for i, p in enumerate(polys):
        k = v + i
        if 0 <= k < len(p.c) and p.c[k]:
            out = out + _falling(F, i).scale(p.c[k])
    return out, v


def at_infinity(L: OrePoly, var: str = "z") -> OrePoly:
    """Operator in z = 1/x obtained from Dx = -z^2 Dz."""
    polys = normal_form(L).poly_coeffs()
    Z = OreRing.diff(var, L.ring.base)
    F = Z.coeff_field
    zinv = F.gen().inverse()
    theta = Z([F.zero, F.zero]) + Z.var_elem() ** 2 * Z.generator(1)
    theta = -theta
    total = Z.zero()
    power = Z.one()
    for i, p in enumerate(polys):
        if i:
            power = theta * power
        c = F.zero
        for k, a in enumerate(p.c):
            if a:
                c = c + zinv ** k * a
        total = total + power.lmul_scalar(c)
    return normal_form(total)


def indicial_poly(L: OrePoly, a=0) -> Poly:
    """Indicial polynomial of L at the point a (``"inf"`` for infinity), monic in s."""
    if isinstance(a, str) and a.lower() in ("inf", "infinity", "oo"):
        P, _ = _indicial_at_zero(at_infinity(L))
        return P.monic()
    La = translate_diffop(L, a)
    P, _ = _indicial_at_zero(La)
    return P.monic()


@dataclass(frozen=True)
class PointClass:
    point: object
    kind: str  # "ordinary", "regular-singular", "irregular-singular"
    indicial: Poly
    exponents: tuple  # exact rational roots with multiplicity
    other_factors: tuple  # irreducible factors without rational roots

    def as_dict(self):
        from .cli.printing import format_poly

        F = self.indicial.field
        return {
            "point": str(self.point),
            "kind": self.kind,
            "indicial": format_poly(self.indicial, "s"),
            "exponents": [{"value": str(r), "multiplicity": e} for r, e in self.exponents],
            "other_factors": [format_poly(q, "s") for q in self.other_factors],
        }


def _is_inf(a) -> bool:
    return isinstance(a, str) and a.lower() in ("inf", "infinity", "oo")


def classify_point(L: OrePoly, a=0) -> PointClass:
    L = normal_form(L)
    m = L.order
    if _is_inf(a):
        M = at_infinity(L)
        lead = M.poly_coeffs()[-1]
        ordinary = bool(lead.evaluate(lead.field.zero))
        ind = indicial_poly(L, INF)
    else:
        La = translate_diffop(L, a)
        lead = La.poly_coeffs()[-1]
        ordinary = bool(lead.evaluate(lead.field.zero))
        ind = indicial_poly(L, a)
    if ordinary:
        kind = "ordinary"
    elif ind.deg == m:
        kind = "regular-singular"
    else:
        kind = "irregular-singular"
    exps, others = _exponents(ind)
    return PointClass(INF if _is_inf(a) else a, kind, ind, exps, others)


def _exponents(ind: Poly):
    if ind.deg <= 0:
        return (), ()
    try:
        facs = factor_over_q(ind)
    except NotImplementedError:
        return tuple(rational_roots(ind)), (ind,)
    roots = []
    others = []
    for q, e in facs:
        if q.deg == 1:
            r = -q.c[0] / q.c[1]
            try:
                roots.append((mpq(r), e))
            except TypeError:
                others.append(q)
        else:
            others.append(q)
    return tuple(sorted(roots)), tuple(others)


def singular_factors(L: OrePoly):
    """Squarefree decomposition of the leading coefficient: list of (q, e)."""
    lead = normal_form(L).poly_coeffs()[-1]
    return squarefree_decomposition(lead)


def is_fuchsian(L: OrePoly) -> bool:
    """All finite singular points and infinity are at worst regular singular."""
    L = normal_form(L)
    polys = L.poly_coeffs()
    m = L.order
    for q, e in singular_factors(L):
        for i, p in enumerate(polys[:-1]):
            t = max(0, e - m + i)
            if t and p and (p % (q ** t)):
                return False
    return classify_point(L, INF).kind != "irregular-singular"


# ---------------------------------------------------------------- root isolation


def _extra_bits(q: mpq) -> int:
    return max(0, (q.denominator.bit_length() - q.numerator.bit_length()) // 2 + 2)


def _sqrt_ub(q: mpq, bits: int = 64) -> mpq:
    """Rational upper bound of sqrt(q) with relative accuracy about 2^-bits."""
    if q <= 0:
        return mpq(0)
    bits += _extra_bits(q)
    scale = mpz(1) << (2 * bits)
    num = q.numerator * scale
    den = q.denominator
    r = isqrt(num // den) + 1
    return mpq(r, mpz(1) << bits)


def _sqrt_lb(q: mpq, bits: int = 64) -> mpq:
    if q <= 0:
        return mpq(0)
    bits += _extra_bits(q)
    scale = mpz(1) << (2 * bits)
    r = isqrt(q.numerator * scale // q.denominator)
    return mpq(r, mpz(1) << bits)


def _dyadic(x, bits: int) -> mpq:
    m = mpmath.mpf(x) * mpmath.mpf(2) ** bits
    return mpq(int(mpmath.nint(m)), mpz(1) << bits)


@dataclass(frozen=True)
class RootEnclosure:
    center: GaussRat
    radius: mpq
    modulus_lo: mpq
    modulus_hi: mpq

    def contains(self, z: GaussRat) -> bool:
        return (z - self.center).norm() <= self.radius ** 2

    def as_dict(self, digits: int = 20):
        return {
            "center": {"re": str(self.center.re), "im": str(self.center.im)},
            "radius": str(self.radius),
            "modulus": [str(self.modulus_lo), str(self.modulus_hi)],
            "approx": _gauss_str(self.center, digits),
        }


def _gauss_str(z: GaussRat, digits: int) -> str:
    with mpmath.workdps(digits + 5):
        re = mpmath.mpf(int(z.re.numerator)) / int(z.re.denominator)
        im = mpmath.mpf(int(z.im.numerator)) / int(z.im.denominator)
        s = mpmath.nstr(re, digits)
        if im:
            s += (" + " if im > 0 else " - ") + mpmath.nstr(abs(im), digits) + "*i"
        return s


def isolate_roots(p: Poly, precision: int = 30) -> list[RootEnclosure]:
    """Certified disks, one per root of the squarefree polynomial p over QQ or QQ(i)."""
    if p.deg <= 0:
        return []
    F = p.field
    pc = Poly(p.c, QQI)
    dp = pc.derivative()
    d = p.deg
    dps = max(30, precision + 15)
    while True:
        with mpmath.workdps(dps):
            coeffs = []
            for a in reversed(pc.c):
                coeffs.append(mpmath.mpc(mpmath.mpf(int(a.re.numerator)) / int(a.re.denominator),
                                         mpmath.mpf(int(a.im.numerator)) / int(a.im.denominator)))
            try:
                approx = mpmath.polyroots(coeffs, maxsteps=200 + 20 * d, extraprec=4 * dps)
            except mpmath.libmp.NoConvergence:
                dps *= 2
                continue
            bits = int(dps * 3.33) + 8
            centers = [GaussRat(_dyadic(mpmath.re(z), bits), _dyadic(mpmath.im(z), bits))
                       for z in approx]
        out = []
        ok = True
        for z in centers:
            pv = pc.evaluate(z)
            dv = dp.evaluate(z)
            if not dv:
                ok = False
                break
            r2 = mpq(d * d) * pv.norm() / dv.norm()
            r = _sqrt_ub(r2)
            out.append((z, r))
        if ok:
            target = mpq(1, 10 ** precision) / 2
            ok = all(r <= target for _, r in out)
        if ok:
            for i in range(len(out)):
                for j in range(i + 1, len(out)):
                    zi, ri = out[i]
                    zj, rj = out[j]
                    if (ri + rj) ** 2 >= (zi - zj).norm():
                        ok = False
        if ok:
            res = []
            for z, r in out:
                mod_c2 = z.norm()
                lo = max(mpq(0), _sqrt_lb(mod_c2) - r)
                hi = _sqrt_ub(mod_c2) + r
                res.append(RootEnclosure(z, r, lo, hi))
            return res
        dps *= 2
        if dps > 20000:
            raise ArithmeticError("root isolation failed to converge")


def dominant_singularity(L_or_poly, precision: int = 30, exclude_origin: bool = True):
    """Certified enclosures of the roots of minimal modulus of the leading coefficient."""
    if isinstance(L_or_poly, OrePoly):
        p = normal_form(L_or_poly).poly_coeffs()[-1]
    else:
        p = L_or_poly
    if p.field.params:
        raise ValueError("dominant singularity needs numeric coefficients")
    if exclude_origin:
        v = p.valuation()
        if v > 0:
            p = Poly(p.c[v:], p.field)
    if p.deg <= 0:
        raise ValueError("no finite singularities")
    sf = Poly.one(p.field)
    for q, _ in squarefree_decomposition(p):
        sf = sf * q
    roots = isolate_roots(sf, precision)
    best = min(r.modulus_hi for r in roots)
    return sorted([r for r in roots if r.modulus_lo <= best],
                  key=lambda r: (r.center.re, r.center.im))


def singular_distance_lower_bound(L: OrePoly, a=0, precision: int = 10) -> mpq | None:
    """Rational lower bound on the distance from a to the nearest nonzero-distance
    singular point (None when the leading coefficient has no other roots)."""
    La = translate_diffop(L, a)
    p = La.poly_coeffs()[-1]
    v = p.valuation()
    if v > 0:
        p = Poly(p.c[v:], p.field)
    if p.deg <= 0:
        return None
    sf = Poly.one(p.field)
    for q, _ in squarefree_decomposition(p):
        sf = sf * q
    roots = isolate_roots(sf, precision)
    return min(r.modulus_lo for r in roots)


# ---------------------------------------------------------------- asymptotics


def _to_sympy(v):
    if isinstance(v, sympy.Basic):
        return v
    if isinstance(v, (int, Fraction)):
        return sympy.Rational(v)
    if isinstance(v, str):
        return sympy.sympify(v.replace("^", "**"))
    try:
        q = mpq(v)
        return sympy.Rational(int(q.numerator), int(q.denominator))
    except (TypeError, ValueError):
        return sympy.sympify(v)


@dataclass(frozen=True)
class AsymptoticTerm:
    """a_n ~ c * rho^(-n) * n^(-alpha-1) / Gamma(-alpha) * log(n)^m."""

    c: sympy.Expr
    rho: sympy.Expr
    alpha: sympy.Rational
    m: int = 0

    def __post_init__(self):
        if self.alpha.is_integer and self.alpha >= 0:
            raise ValueError("theorem hypothesis violated: alpha is a nonnegative integer")

    def expr(self, n=None):
        n = n if n is not None else sympy.Symbol("n", positive=True)
        g = sympy.gamma(-self.alpha, evaluate=False)
        out = self.c * self.rho ** (-n) * n ** (-self.alpha - 1) / g
        if self.m:
            out = out * sympy.log(n) ** self.m
        return out

    def __str__(self):
        return sympy.sstr(self.expr()).replace("**", "^")

    def numeric(self, n: int, digits: int = 15):
        """Value of the asymptotic estimate at n (display only)."""
        with mpmath.workdps(digits + 10):
            c = mpmath.mpmathify(sympy.N(self.c, digits + 10))
            rho = mpmath.mpmathify(sympy.N(self.rho, digits + 10))
            a = mpmath.mpf(sympy.N(self.alpha, digits + 10))
            val = c * rho ** (-n) * mpmath.mpf(n) ** (-a - 1) / mpmath.gamma(-a)
            if self.m:
                val *= mpmath.log(n) ** self.m
            return +val

    def as_dict(self, digits: int = 15):
        return {
            "c": sympy.sstr(self.c).replace("**", "^"),
            "rho": sympy.sstr(self.rho).replace("**", "^"),
            "alpha": str(self.alpha),
            "m": self.m,
            "expression": str(self),
            "gamma_factor": f"Gamma({-self.alpha})",
            "gamma_value": mpmath.nstr(mpmath.gamma(-mpmath.mpf(sympy.N(self.alpha, 30))), digits),
        }


def asympt_translate(c, rho, alpha, m: int = 0) -> AsymptoticTerm:
    """Coefficient asymptotics of c (1 - z/rho)^alpha log^m(1/(1 - z/rho))."""
    a = _to_sympy(alpha)
    if not a.is_rational:
        raise ValueError("alpha must be rational")
    return AsymptoticTerm(_to_sympy(c), _to_sympy(rho), sympy.Rational(a), int(m))
