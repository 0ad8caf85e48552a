"""Dense univariate polynomials over a coefficient field."""

from __future__ import annotations

from math import lcm
from typing import Iterable, Sequence

from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd

from .fields import QQ


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Polynomial with dense coefficients ``c[i]`` of ``x^i`` over ``field``.

    The zero polynomial has an empty coefficient tuple and degree -1 (used as the
    sentinel for minus infinity; comparisons with other degrees behave the same).
    """

    __slots__ = ("field", "c")

    def __init__(self, coeffs: Iterable = (), field=QQ, _raw=False):
        object.__setattr__(self, "field", field)
        if _raw:
            object.__setattr__(self, "c", coeffs)
        else:
            object.__setattr__(self, "c", _strip([field(a) for a in coeffs]))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self.c, self.field))

    # construction helpers
    @classmethod
    def _make(cls, coeffs: list, field) -> "Poly":
        return cls(_strip(coeffs), field, _raw=True)

    @classmethod
    def zero(cls, field=QQ) -> "Poly":
        return cls((), field, _raw=True)

    @classmethod
    def one(cls, field=QQ) -> "Poly":
        return cls((field.one,), field, _raw=True)

    @classmethod
    def const(cls, a, field=QQ) -> "Poly":
        a = field(a)
        return cls((a,) if a else (), field, _raw=True)

    @classmethod
    def x(cls, field=QQ) -> "Poly":
        return cls((field.zero, field.one), field, _raw=True)

    @classmethod
    def monomial(cls, k: int, a=1, field=QQ) -> "Poly":
        a = field(a)
        if not a:
            return cls.zero(field)
        return cls((field.zero,) * k + (a,), field, _raw=True)

    def coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field != self.field:
                return Poly(other.c, self.field)
            return other
        return Poly.const(other, self.field)

    # basic properties
    @property
    def deg(self) -> int:
        return len(self.c) - 1

    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1] if self.c else self.field.zero

    def coeff(self, i: int):
        return self.c[i] if 0 <= i < len(self.c) else self.field.zero

    def is_zero(self) -> bool:
        return not self.c

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def __bool__(self):
        return bool(self.c)

    def __len__(self):
        return len(self.c)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if not self.c:
            return other == 0
        return len(self.c) == 1 and self.c[0] == other

    def __hash__(self):
        return hash(self.c)

    # ring operations
    def __neg__(self):
        return Poly._make([-a for a in self.c], self.field)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self.coerce(other)
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return Poly._make(out, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self.coerce(other))

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.c, other.c
        if not a or not b:
            return Poly.zero(self.field)
        out = [self.field.zero] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if not u:
                continue
            for j, v in enumerate(b):
                out[i + j] = out[i + j] + u * v
        return Poly._make(out, self.field)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, a) -> "Poly":
        a = self.field(a)
        if not a:
            return Poly.zero(self.field)
        return Poly(tuple(a * v for v in self.c), self.field, _raw=True)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.one(self.field), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift_degree(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if not self.c:
            return self
        return Poly((self.field.zero,) * k + self.c, self.field, _raw=True)

    def divmod(self, other: "Poly"):
        other = self.coerce(other)
        if not other.c:
            raise ZeroDivisionError("division by zero polynomial")
        r = list(self.c)
        db = len(other.c) - 1
        inv = self.field.one / other.c[-1]
        if len(r) - 1 < db:
            return Poly.zero(self.field), self
        q = [self.field.zero] * (len(r) - db)
        for i in range(len(r) - 1, db - 1, -1):
            t = r[i]
            if not t:
                continue
            t = t * inv
            q[i - db] = t
            for j, v in enumerate(other.c):
                r[i - db + j] = r[i - db + j] - t * v
        return Poly._make(q, self.field), Poly._make(r[:db], self.field)

    __divmod__ = divmod

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exquo(self, other) -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(self.field.one / self.c[-1])

    # evaluation and calculus
    def __call__(self, t):
        acc = 0
        for a in reversed(self.c):
            acc = acc * t + a
        return acc

    def evaluate(self, t):
        acc = self.field.zero
        for a in reversed(self.c):
            acc = acc * t + a
        return acc

    def derivative(self) -> "Poly":
        return Poly._make([i * a for i, a in enumerate(self.c)][1:], self.field)

    def shift(self, a) -> "Poly":
        return poly_shift(self, a)

    def compose(self, q: "Poly") -> "Poly":
        acc = Poly.zero(self.field)
        for a in reversed(self.c):
            acc = acc * q + a
        return acc

    def map_coeffs(self, f, field=None) -> "Poly":
        field = field or self.field
        return Poly([f(a) for a in self.c], field)

    def reverse(self, n: int | None = None) -> "Poly":
        """x^n p(1/x) with n defaulting to the degree."""
        n = self.deg if n is None else n
        c = list(self.c) + [self.field.zero] * (n + 1 - len(self.c))
        return Poly._make(c[: n + 1][::-1], self.field)

    def valuation(self) -> int:
        for i, a in enumerate(self.c):
            if a:
                return i
        return -1

    def gcd(self, other: "Poly") -> "Poly":
        return poly_xgcd(self, other)[0] if (self or other) else Poly.zero(self.field)

    def primitive(self) -> "Poly":
        """Scale to integral, content-free form with positive leading sign."""
        if not self.c:
            return self
        lam = self.field.primitive_scale(list(reversed(self.c)))
        return self.scale(lam)

    # display
    def __repr__(self):
        return f"Poly({[str(a) for a in self.c]}, {self.field!r})"

    def to_str(self, var: str = "x") -> str:
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if not a:
                continue
            s = str(a)
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mono:
                if s == "1":
                    term = mono
                elif s == "-1":
                    term = "-" + mono
                elif any(ch in s[1:] for ch in "+-") or "/" in s or "*" in s:
                    term = f"({s})*{mono}"
                else:
                    term = f"{s}*{mono}"
            else:
                term = s if not any(ch in s[1:] for ch in "+-") else f"({s})"
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += t if t.startswith("-") else "+" + t
        return out

    def __str__(self):
        return self.to_str()


def poly_from_ints(coeffs: Sequence, field=QQ) -> Poly:
    return Poly(coeffs, field)


def poly_shift(p: Poly, a) -> Poly:
    """Return q with q(x) = p(x + a)."""
    a = p.field(a)
    if not a or len(p.c) <= 1:
        return p
    c = list(p.c)
    n = len(c)
    # repeated synthetic division (Horner scheme for the Taylor shift)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] = c[j] + a * c[j + 1]
    return Poly._make(c, p.field)


def poly_xgcd(a: Poly, b: Poly):
    """Extended gcd: (g, u, v) with u*a + v*b = g and g monic."""
    if not a and not b:
        raise ValueError("gcd of zero pair")
    F = a.field
    r0, r1 = a, b
    u0, u1 = Poly.one(F), Poly.zero(F)
    v0, v1 = Poly.zero(F), Poly.one(F)
    while r1:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    inv = F.one / r0.lc
    return r0.scale(inv), u0.scale(inv), v0.scale(inv)


def _integer_coeffs(p: Poly) -> list:
    """Primitive-up-to-sign integer multiple of p over QQ, highest degree first."""
    den = 1
    for a in p.c:
        den = lcm(den, int(a.denominator))
    return [ZZ(int(a * den)) for a in reversed(p.c)]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    if a.field is QQ and min(a.deg, b.deg) > 0:
        # heuristic/modular gcd over ZZ avoids the coefficient growth of Euclid over QQ
        g = dup_gcd(_integer_coeffs(a), _integer_coeffs(b), ZZ)
        return Poly([int(c) for c in reversed(g)], QQ).monic()
    r0, r1 = a, b
    while r1:
        r0, r1 = r1, r0 % r1
    return r0.monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return Poly.zero(a.field)
    return (a * b.exquo(poly_gcd(a, b))).monic()


def resultant(a: Poly, b: Poly):
    """Resultant of two polynomials via the Euclidean remainder sequence."""
    F = a.field
    if not a or not b:
        return F.zero
    res = F.one
    while True:
        da, db = a.deg, b.deg
        if db == 0:
            return res * b.lc ** da
        q, r = a.divmod(b)
        if not r:
            return F.zero
        dr = r.deg
        if (da * db) % 2:
            res = -res
        res = res * b.lc ** (da - dr)
        a, b = b, r


def squarefree_decomposition(p: Poly):
    """Yun's algorithm: list of (q_i, i) with p = lc * prod q_i^i, q_i squarefree coprime."""
    if p.deg <= 0:
        return []
    out = []
    a = p.monic()
    b = a.derivative()
    c = poly_gcd(a, b)
    w = a.exquo(c)
    y = b.exquo(c)
    z = y - w.derivative()
    i = 1
    while w.deg > 0:
        g = poly_gcd(w, z)
        if g.deg > 0:
            out.append((g, i))
        w = w.exquo(g)
        y = z.exquo(g)
        z = y - w.derivative()
        i += 1
    return out


def squarefree_part(p: Poly) -> Poly:
    out = Poly.one(p.field)
    for q, _ in squarefree_decomposition(p):
        out = out * q
    return out
