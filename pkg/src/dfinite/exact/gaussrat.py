"""Gaussian rationals: complex numbers with rational real and imaginary parts."""

from __future__ import annotations

from gmpy2 import mpq, mpz


def _q(x) -> mpq:
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


class GaussRat:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _q(re))
        object.__setattr__(self, "im", _q(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @staticmethod
    def coerce(x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, complex):
            raise TypeError("floating-point complex values are not exact")
        return GaussRat(x, 0)

    def is_real(self) -> bool:
        return self.im == 0

    def conj(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def norm(self) -> mpq:
        """Squared modulus re² + im²."""
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, type(mpq(0)), type(mpz(0)))):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussRat.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, GaussRat):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussRat(a * c - b * d, a * d + b * c)
        try:
            o = _q(other)
        except TypeError:
            return NotImplemented
        return GaussRat(self.re * o, self.im * o)

    __rmul__ = __mul__

    def inverse(self) -> "GaussRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, GaussRat):
            return self * other.inverse()
        o = _q(other)
        if o == 0:
            raise ZeroDivisionError("division by zero")
        return GaussRat(self.re / o, self.im / o)

    def __rtruediv__(self, other):
        return GaussRat.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = GaussRat(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = self.im
        if self.re == 0:
            head = ""
        else:
            head = str(self.re)
        if im == 1:
            tail = "i"
        elif im == -1:
            tail = "-i"
        else:
            tail = f"{im}*i"
        if head and not tail.startswith("-"):
            return f"{head}+{tail}"
        return head + tail

    def __reduce__(self):
        return (GaussRat, (str(self.re), str(self.im)))


I = GaussRat(0, 1)
