"""Univariate rational functions num/den with monic, coprime denominator."""

from __future__ import annotations

from .fields import QQ
from .poly import Poly, poly_gcd


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _normalized=False):
        if den is None:
            den = Poly.one(num.field)
        if not _normalized:
            num, den = _normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    def __reduce__(self):
        return (RatFunc, (self.num, self.den, True))

    @property
    def field(self):
        return self.num.field

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFunc":
        return cls(p, Poly.one(p.field), _normalized=True)

    @classmethod
    def const(cls, a, field=QQ) -> "RatFunc":
        return cls(Poly.const(a, field), Poly.one(field), _normalized=True)

    @classmethod
    def x(cls, field=QQ) -> "RatFunc":
        return cls(Poly.x(field), Poly.one(field), _normalized=True)

    def coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc.from_poly(other)
        return RatFunc.const(other, self.field)

    def is_poly(self) -> bool:
        return self.den.deg == 0

    def is_const(self) -> bool:
        return self.den.deg == 0 and self.num.deg <= 0

    def const_value(self):
        return self.num.coeff(0)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly):
            return self.den.deg == 0 and self.num == other
        return self.den.deg == 0 and self.num == other

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self.coerce(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if self.den.deg == 0:
            return RatFunc(self.num * o.den + o.num, o.den, _normalized=True)
        if o.den.deg == 0:
            return RatFunc(self.num + o.num * self.den, self.den, _normalized=True)
        g = poly_gcd(self.den, o.den)
        if g.deg == 0:
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den,
                           _normalized=True)
        a = o.den.exquo(g)
        b = self.den.exquo(g)
        return RatFunc(self.num * a + o.num * b, self.den * a)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self.coerce(other))

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (RatFunc, Poly)):
            a = self.field(other)
            if not a:
                return RatFunc.const(0, self.field)
            return RatFunc(self.num.scale(a), self.den, _normalized=True)
        o = self.coerce(other)
        if not self.num or not o.num:
            return RatFunc.const(0, self.field)
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = (self.num, o.den) if g1.deg == 0 else (self.num.exquo(g1), o.den.exquo(g1))
        n2, d1 = (o.num, self.den) if g2.deg == 0 else (o.num.exquo(g2), self.den.exquo(g2))
        num = n1 * n2
        den = d1 * d2
        lc = den.lc
        if lc != 1:
            inv = self.field.one / lc
            num, den = num.scale(inv), den.scale(inv)
        return RatFunc(num, den, _normalized=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("division by zero rational function")
        lc = self.num.lc
        inv = self.field.one / lc
        return RatFunc(self.den.scale(inv), self.num.scale(inv), _normalized=True)

    def __truediv__(self, other):
        if not isinstance(other, (RatFunc, Poly)):
            a = self.field(other)
            if not a:
                raise ZeroDivisionError("division by zero")
            return self * (self.field.one / a)
        return self * self.coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, _normalized=True)

    def __call__(self, t):
        d = self.den(t)
        if not d:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(t) / d

    def shift(self, a) -> "RatFunc":
        """f(x + a); preserves normalization since shifting keeps lc and coprimality."""
        if not a:
            return self
        return RatFunc(self.num.shift(a), self.den.shift(a), _normalized=True)

    def derivative(self) -> "RatFunc":
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(),
                       self.den * self.den)

    def map_coeffs(self, f, field=None) -> "RatFunc":
        return RatFunc(self.num.map_coeffs(f, field), self.den.map_coeffs(f, field))

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"

    def to_str(self, var="x"):
        n = self.num.to_str(var)
        if self.den.deg == 0:
            return n
        return f"({n})/({self.den.to_str(var)})"

    def __str__(self):
        return self.to_str()


def _normalize(num: Poly, den: Poly):
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    F = num.field
    if not num:
        return Poly.zero(F), Poly.one(F)
    if den.deg > 0:
        g = poly_gcd(num, den)
        if g.deg > 0:
            num, den = num.exquo(g), den.exquo(g)
    lc = den.lc
    if lc != 1:
        inv = F.one / lc
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def ratfunc_normalize(num: Poly, den: Poly) -> RatFunc:
    """Reduce num/den to lowest terms with a monic denominator."""
    return RatFunc(num, den)


class RatFuncField:
    """The field F(var) of rational functions over a base field F."""

    def __init__(self, base=QQ, var="x"):
        self.base = base
        self.var = var
        self.zero = RatFunc.const(0, base)
        self.one = RatFunc.const(1, base)
        self.params = base.params
        self.is_complex = base.is_complex

    def __eq__(self, other):
        return isinstance(other, RatFuncField) and other.base == self.base

    def __hash__(self):
        return hash(("RatFuncField", self.base))

    def __repr__(self):
        return f"RatFuncField({self.base!r}, {self.var!r})"

    def __call__(self, a):
        if isinstance(a, RatFunc):
            return a
        if isinstance(a, Poly):
            return RatFunc.from_poly(a)
        return RatFunc.const(a, self.base)

    def gen(self) -> RatFunc:
        return RatFunc.x(self.base)

    def primitive_scale(self, elems, poly_content: bool = True):
        """Rational function clearing denominators and polynomial content.

        With ``poly_content=False`` only denominators and constant content are
        removed, so no polynomial factor common to all elements is divided out.
        """
        from .poly import poly_lcm

        nz = [e for e in elems if e]
        if not nz:
            return self.one
        den = Poly.one(self.base)
        for e in nz:
            if e.den.deg > 0:
                den = poly_lcm(den, e.den)
        nums = [e.num * den.exquo(e.den) for e in nz]
        g = Poly.zero(self.base)
        for p in nums:
            if not poly_content:
                g = Poly.one(self.base)
                break
            g = poly_gcd(g, p) if g else p.monic()
            if g.deg == 0:
                break
        nums = [p.exquo(g) for p in nums] if g.deg > 0 else nums
        coeffs = [c for p in nums for c in reversed(p.c)]
        lam = self.base.primitive_scale(coeffs)
        return RatFunc(den.scale(lam), g)
