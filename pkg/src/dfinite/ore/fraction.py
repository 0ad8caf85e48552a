"""Left fractions B^-1 * A of Ore polynomials."""

from __future__ import annotations

from .euclid import lclm_cofactors, ore_gcld, ore_ldivmod
from .ring import OrePoly, normal_form


def _lift(P: OrePoly, k: int) -> OrePoly:
    return P.ring.generator(k) * P if k else P


class OreFraction:
    """The fraction den^-1 * num.

    Representatives are kept with both parts free of negative generator powers
    (for shift rings) and with their greatest common left divisor cancelled.
    """

    __slots__ = ("den", "num")

    def __init__(self, den: OrePoly, num: OrePoly, reduce: bool = True):
        if not den:
            raise ZeroDivisionError("zero denominator")
        den._check(num)
        m = min(den.low, num.low if num else 0)
        if m < 0:
            den, num = _lift(den, -m), _lift(num, -m)
        if reduce:
            den, num = _reduce(den, num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "num", num)

    def __setattr__(self, name, value):
        raise AttributeError("OreFraction is immutable")

    @property
    def ring(self):
        return self.den.ring

    @classmethod
    def from_poly(cls, P: OrePoly) -> "OreFraction":
        return cls(P.ring.one(), P)

    def is_zero(self) -> bool:
        return not self.num

    def inverse(self) -> "OreFraction":
        """(B^-1 A)^-1 = A^-1 B."""
        if not self.num:
            raise ZeroDivisionError("inverse of zero fraction")
        return OreFraction(self.num, self.den)

    def __add__(self, other):
        return frac_add(self, _coerce(self, other))

    def __sub__(self, other):
        o = _coerce(self, other)
        return frac_add(self, OreFraction(o.den, -o.num, reduce=False))

    def __neg__(self):
        return OreFraction(self.den, -self.num, reduce=False)

    def __mul__(self, other):
        return frac_mul(self, _coerce(self, other))

    def __rmul__(self, other):
        return frac_mul(_coerce(self, other), self)

    def __eq__(self, other):
        if not isinstance(other, OreFraction):
            return NotImplemented
        return frac_equal(self, other)

    __hash__ = None

    def __repr__(self):
        return f"OreFraction(den={self.den!r}, num={self.num!r})"


def _coerce(F: OreFraction, other) -> OreFraction:
    if isinstance(other, OreFraction):
        return other
    if isinstance(other, OrePoly):
        return OreFraction.from_poly(other)
    return OreFraction.from_poly(F.ring.scalar(other))


def _reduce(den: OrePoly, num: OrePoly):
    """Cancel the greatest common left divisor of den and num."""
    if not num:
        return den.ring.one(), num
    if den.order == 0:
        # scalar denominator: fold it into the numerator
        inv = den.coeffs[-1].inverse()
        return den.ring.one(), num.lmul_scalar(inv)
    G = ore_gcld(den, num)
    if G.order > 0:
        den, r1 = ore_ldivmod(den, G)
        num, r2 = ore_ldivmod(num, G)
        assert not r1 and not r2
    lam = den.ring.coeff_field.primitive_scale(list(reversed(den.coeffs)))
    return den.lmul_scalar(lam), num.lmul_scalar(lam)


def frac_add(F: OreFraction, G: OreFraction) -> OreFraction:
    """B^-1 A + D^-1 C = lclm(B, D)^-1 (u A + v C) with u B = v D = lclm(B, D)."""
    if not F.num:
        return G
    if not G.num:
        return F
    L, u, v = lclm_cofactors(F.den, G.den)
    return OreFraction(L, u * F.num + v * G.num)


def frac_mul(F: OreFraction, G: OreFraction) -> OreFraction:
    """B^-1 A * D^-1 C = (u B)^-1 (v C) with u A = v D = lclm(A, D)."""
    if not F.num or not G.num:
        return OreFraction(F.ring.one(), F.ring.zero())
    _, u, v = lclm_cofactors(F.num, G.den)
    return OreFraction(u * F.den, v * G.num)


def frac_equal(F: OreFraction, G: OreFraction) -> bool:
    """B^-1 A = D^-1 C iff u A = v C where u B = v D = lclm(B, D)."""
    _, u, v = lclm_cofactors(F.den, G.den)
    return u * F.num == v * G.num


def frac_numerator(F: OreFraction) -> OrePoly:
    return normal_form(F.num)
