"""Coefficient fields: QQ, QQ(i), and rational functions over QQ in named parameters.

A field object converts values, tests zero, serializes elements and knows how to
rescale a list of its elements to a primitive integral form.  Elements are plain
arithmetic objects (gmpy2 ``mpq``, :class:`GaussRat`, sympy ``FracElement``) so the
generic polynomial code never needs to ask the field for ``+`` or ``*``.
"""

from __future__ import annotations

import math
from functools import reduce

import sympy
from gmpy2 import mpq, mpz
from sympy.polys.domains import QQ as _SQQ
from sympy.polys.fields import field as _sympy_field

from .gaussrat import GaussRat

_MPQ = type(mpq(0))
_MPZ = type(mpz(0))


def _ilcm(a, b):
    return a // math.gcd(a, b) * b


class RationalField:
    """The field of rational numbers backed by gmpy2."""

    name = "QQ"
    params: tuple = ()
    is_complex = False

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)

    def __call__(self, x):
        if isinstance(x, _MPQ):
            return x
        if isinstance(x, GaussRat):
            if x.im != 0:
                raise ValueError("non-real value in QQ")
            return x.re
        if isinstance(x, str):
            return mpq(x.strip())
        return mpq(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def to_json(self, a):
        return str(mpq(a))

    def from_json(self, s):
        if isinstance(s, dict):
            return self(GaussRat(s["re"], s.get("im", "0")))
        return mpq(str(s))

    def to_sympy(self, a):
        a = mpq(a)
        return sympy.Rational(int(a.numerator), int(a.denominator))

    def primitive_scale(self, elems):
        """Scalar making ``elems`` integral, content free, first nonzero positive."""
        nz = [mpq(e) for e in elems if e]
        if not nz:
            return self.one
        den = reduce(_ilcm, (int(e.denominator) for e in nz), 1)
        num = reduce(math.gcd, (int(e.numerator) for e in nz), 0)
        lam = mpq(den, num)
        return -lam if nz[0] < 0 else lam

    def make_positive(self, a):
        return -1 if a < 0 else 1


class GaussianField:
    """QQ(i), elements are :class:`GaussRat`."""

    name = "QQI"
    params: tuple = ()
    is_complex = True

    def __init__(self):
        self.zero = GaussRat(0)
        self.one = GaussRat(1)

    def __call__(self, x):
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, str):
            return GaussRat(mpq(x.strip()))
        return GaussRat(x)

    def __eq__(self, other):
        return isinstance(other, GaussianField)

    def __hash__(self):
        return hash("QQI")

    def __repr__(self):
        return "QQI"

    def to_json(self, a):
        a = self(a)
        if a.im == 0:
            return str(a.re)
        return {"re": str(a.re), "im": str(a.im)}

    def from_json(self, s):
        if isinstance(s, dict):
            return GaussRat(s["re"], s.get("im", "0"))
        return GaussRat(mpq(str(s)))

    def to_sympy(self, a):
        a = self(a)
        return QQ.to_sympy(a.re) + sympy.I * QQ.to_sympy(a.im)

    def primitive_scale(self, elems):
        nz = [self(e) for e in elems if e]
        if not nz:
            return self.one
        lam = nz[0].inverse()
        parts = []
        for e in nz:
            e = e * lam
            parts.extend(p for p in (e.re, e.im) if p)
        den = reduce(_ilcm, (int(p.denominator) for p in parts), 1)
        num = reduce(math.gcd, (int(p.numerator) for p in parts), 0)
        return lam * mpq(den, num)


class ParamField:
    """Rational functions over QQ in a fixed tuple of parameter names."""

    is_complex = False

    def __init__(self, params):
        params = tuple(params)
        if not params:
            raise ValueError("ParamField needs at least one parameter")
        self.params = params
        self.name = "QQ(" + ",".join(params) + ")"
        self.K, *gens = _sympy_field(",".join(params), _SQQ)
        self.gens = tuple(self.K.gens)
        self.zero = self.K.zero
        self.one = self.K.one
        self._symbols = tuple(sympy.Symbol(p) for p in params)

    def __eq__(self, other):
        return isinstance(other, ParamField) and other.params == self.params

    def __hash__(self):
        return hash(("ParamField", self.params))

    def __repr__(self):
        return f"ParamField({self.params!r})"

    def __reduce__(self):
        return (ParamField, (self.params,))

    def gen(self, name):
        return self.gens[self.params.index(name)]

    def __call__(self, x):
        K = self.K
        if isinstance(x, str):
            return self.from_expr(sympy.sympify(x.replace("^", "**"), locals=self._locals()))
        if isinstance(x, GaussRat):
            if x.im != 0:
                raise ValueError("complex values are not supported with parameters")
            x = x.re
        if isinstance(x, (int, _MPZ)):
            return K(int(x))
        if isinstance(x, _MPQ):
            return K.ground_new(x)
        if hasattr(x, "field") and x.field == K:
            return x
        if isinstance(x, sympy.Basic):
            return self.from_expr(x)
        return K(x)

    def _locals(self):
        return {p: s for p, s in zip(self.params, self._symbols)}

    def from_expr(self, expr):
        return self.K.from_expr(sympy.sympify(expr))

    def to_sympy(self, a):
        return self(a).as_expr()

    def to_json(self, a):
        return str(sympy.sstr(self.to_sympy(a))).replace("**", "^").replace(" ", "")

    def from_json(self, s):
        return self(str(s))

    def primitive_scale(self, elems):
        nz = [self(e) for e in elems if e]
        if not nz:
            return self.one
        ring = self.K.ring
        den = ring.one
        for e in nz:
            den = den.lcm(e.denom)
        nums = [e.numer * den.exquo(e.denom) for e in nz]
        g = ring.zero
        for p in nums:
            g = p if not g else g.gcd(p)
        nums = [p.exquo(g) for p in nums]
        # rational content inside the parameter polynomials
        coeffs = [c for p in nums for c in p.coeffs()]
        d = reduce(_ilcm, (int(mpq(c).denominator) for c in coeffs), 1)
        n = reduce(math.gcd, (int(mpq(c).numerator) for c in coeffs), 0)
        lam = self.K(den) / self.K(g) * self.K.ground_new(mpq(d, n))
        lead = nums[0].LC
        if lead < 0:
            lam = -lam
        return lam


QQ = RationalField()
QQI = GaussianField()


def field_for(params=(), complex_=False):
    if params:
        if complex_:
            raise ValueError("parameters and complex coefficients cannot be mixed")
        return ParamField(params)
    return QQI if complex_ else QQ


def join_fields(a, b):
    """Smallest supported field containing both ``a`` and ``b``."""
    if a == b:
        return a
    if isinstance(a, ParamField) or isinstance(b, ParamField):
        pa = a.params if isinstance(a, ParamField) else ()
        pb = b.params if isinstance(b, ParamField) else ()
        if a.is_complex or b.is_complex:
            raise ValueError("parameters and complex coefficients cannot be mixed")
        merged = tuple(dict.fromkeys(pa + pb))
        return ParamField(merged)
    if a.is_complex or b.is_complex:
        return QQI
    return QQ
