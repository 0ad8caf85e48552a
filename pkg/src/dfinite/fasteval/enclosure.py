"""Certified complex enclosures (exact dyadic center, rational radius) and rounding helpers."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from gmpy2 import isqrt, mpq, mpz

from ..exact import GaussRat

MANTISSA = 80


def round_up(x: mpq, bits: int = MANTISSA) -> mpq:
    """Dyadic upper bound of a nonnegative rational with about ``bits`` significant bits."""
    x = mpq(x)
    if x <= 0:
        return mpq(0)
    e = x.numerator.bit_length() - x.denominator.bit_length() - bits
    if e >= 0:
        m = -((-x.numerator) // (x.denominator << e))
        return mpq(m << e)
    m = -((-(x.numerator << -e)) // x.denominator)
    return mpq(m, mpz(1) << -e)


def mul_up(a: mpq, b: mpq) -> mpq:
    return round_up(a * b)


def pow_up(q: mpq, n: int) -> mpq:
    """Upper bound of q^n for q >= 0 with intermediate outward rounding."""
    result = mpq(1)
    base = round_up(q)
    while n:
        if n & 1:
            result = mul_up(result, base)
        n >>= 1
        if n:
            base = mul_up(base, base)
    return result


def sqrt_up(q: mpq, bits: int = MANTISSA) -> mpq:
    if q <= 0:
        return mpq(0)
    extra = max(0, (q.denominator.bit_length() - q.numerator.bit_length()) // 2 + 2)
    b = bits + extra
    r = isqrt(q.numerator * (mpz(1) << (2 * b)) // q.denominator) + 1
    return mpq(r, mpz(1) << b)


def sqrt_down(q: mpq, bits: int = MANTISSA) -> mpq:
    if q <= 0:
        return mpq(0)
    extra = max(0, (q.denominator.bit_length() - q.numerator.bit_length()) // 2 + 2)
    b = bits + extra
    r = isqrt(q.numerator * (mpz(1) << (2 * b)) // q.denominator)
    return mpq(r, mpz(1) << b)


def abs_up(z) -> mpq:
    """Rational upper bound of |z| for a rational or Gaussian rational."""
    if isinstance(z, GaussRat):
        if not z.im:
            return abs(z.re)
        if not z.re:
            return abs(z.im)
        return sqrt_up(z.norm())
    return abs(mpq(z))


def round_dyadic(x: mpq, bits: int) -> mpq:
    """Nearest multiple of 2^-bits."""
    x = mpq(x)
    scaled = x.numerator << bits if bits >= 0 else x.numerator
    den = x.denominator if bits >= 0 else x.denominator << -bits
    m = (2 * scaled + den) // (2 * den)
    return mpq(m, mpz(1) << bits) if bits >= 0 else mpq(m << -bits)


def round_gauss(z, bits: int) -> tuple[GaussRat, mpq]:
    """Dyadic rounding of a (Gaussian) rational and a bound on the rounding error."""
    z = GaussRat.coerce(z)
    re = round_dyadic(z.re, bits)
    im = round_dyadic(z.im, bits)
    err = mpq(0)
    if re != z.re or im != z.im:
        err = mpq(1, mpz(1) << bits) if bits >= 0 else mpq(mpz(1) << -bits)
    return GaussRat(re, im), err


def _dec(x: mpq, decimals: int) -> str:
    """x rounded to ``decimals`` places, as a plain decimal string."""
    scale = mpz(10) ** decimals
    n = x.numerator * scale
    d = x.denominator
    m = (2 * abs(n) + d) // (2 * d)
    sign = "-" if n < 0 and m else ""
    s = str(m).rjust(decimals + 1, "0")
    if decimals:
        return f"{sign}{s[:-decimals]}.{s[-decimals:]}"
    return sign + s


def _err_str(r: mpq) -> str:
    """Upward-rounded scientific notation with two significant digits."""
    if r <= 0:
        return "0"
    e = int(mpmath.floor(mpmath.log10(mpmath.mpf(int(r.numerator)) / int(r.denominator))))
    ten = mpq(10)
    while ten ** (e + 1) <= r:
        e += 1
    while ten ** e > r:
        e -= 1
    mant = r / ten ** (e - 1)
    m = -((-mant.numerator) // mant.denominator)
    if m >= 100:
        m, e = 10, e + 1
    body = str(m)[0] if m % 10 == 0 else f"{str(m)[0]}.{str(m)[1]}"
    return f"{body}e{e}"


@dataclass(frozen=True)
class Enclosure:
    """The closed disk |z - center| <= radius."""

    center: GaussRat
    radius: mpq

    @classmethod
    def exact(cls, z) -> "Enclosure":
        return cls(GaussRat.coerce(z), mpq(0))

    @classmethod
    def around(cls, z, radius, bits: int | None = None) -> "Enclosure":
        """Enclosure of z +- radius, optionally rounding the center to dyadic."""
        radius = mpq(radius)
        if bits is not None:
            c, err = round_gauss(z, bits)
            return cls(c, round_up(radius + err))
        return cls(GaussRat.coerce(z), round_up(radius))

    @property
    def is_real(self) -> bool:
        return not self.center.im

    def contains(self, z) -> bool:
        z = GaussRat.coerce(z)
        return (z - self.center).norm() <= self.radius ** 2

    def contains_mp(self, z) -> bool:
        """Containment test for an mpmath number (approximate, for oracles)."""
        c = self.to_mpmath()
        return abs(mpmath.mpmathify(z) - c) <= mpmath.mpf(self.radius.numerator) / int(
            self.radius.denominator) * (1 + mpmath.mpf(2) ** -40) + mpmath.eps * 4

    def width(self) -> mpq:
        return 2 * self.radius

    def to_mpmath(self):
        re = mpmath.mpf(int(self.center.re.numerator)) / int(self.center.re.denominator)
        if not self.center.im:
            return re
        im = mpmath.mpf(int(self.center.im.numerator)) / int(self.center.im.denominator)
        return mpmath.mpc(re, im)

    def __add__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.center + other.center, self.radius + other.radius)
        return Enclosure(self.center + GaussRat.coerce(other), self.radius)

    def scale(self, a) -> "Enclosure":
        a = GaussRat.coerce(a)
        return Enclosure(self.center * a, round_up(self.radius * abs_up(a)))

    def decimals_for(self) -> int:
        """Number of decimals justified by the radius."""
        if not self.radius:
            return 30
        d = 0
        while mpq(1, 10 ** d) > self.radius and d < 100000:
            d += 1
        return max(d - 1, 0)

    def format(self, decimals: int | None = None) -> str:
        if decimals is None:
            decimals = self.decimals_for()
        rounding = mpq(1, 2 * mpz(10) ** decimals) if self.radius or not _is_finite_dec(
            self.center, decimals) else mpq(0)
        re = _dec(self.center.re, decimals)
        if self.center.im:
            im = _dec(abs(self.center.im), decimals)
            sign = "-" if self.center.im < 0 else "+"
            val = f"{re} {sign} {im}*i"
            rounding = rounding * 2
        else:
            val = re
        err = self.radius + rounding
        return f"{val} ± {_err_str(err)}"

    def __str__(self):
        return self.format()

    def digits(self, sig: int) -> str:
        """Real center rounded to ``sig`` significant digits."""
        x = self.center.re
        intlen = len(str(abs(x.numerator) // x.denominator)) if abs(x) >= 1 else 1
        return _dec(x, max(sig - intlen, 0))

    def as_dict(self, decimals: int | None = None):
        return {
            "center": {"re": str(self.center.re), "im": str(self.center.im)},
            "radius": str(self.radius),
            "decimal": self.format(decimals),
        }


def _is_finite_dec(z: GaussRat, decimals: int) -> bool:
    scale = mpz(10) ** decimals
    return (z.re * scale).denominator == 1 and (z.im * scale).denominator == 1


def _truncate(x: mpq, decimals: int) -> str:
    scale = mpz(10) ** decimals
    v = (x * scale).numerator // (x * scale).denominator
    sign = "-" if v < 0 else ""
    v = abs(v)
    ip, fp = divmod(v, scale)
    return f"{sign}{ip}.{str(fp).zfill(decimals)}" if decimals else f"{sign}{ip}"


def certified_digits(make, sig: int, guard: int = 5) -> str:
    """Leading ``sig`` significant digits (truncated) of a real value.

    ``make(p)`` must return an :class:`Enclosure` of radius at most 10^-p; the
    precision grows until both ends of the interval agree on the digits.
    """
    while True:
        enc = make(sig + guard)
        if enc.center.im:
            raise ValueError("certified digits need a real value")
        lo = enc.center.re - enc.radius
        hi = enc.center.re + enc.radius
        if lo > 0 or hi < 0:
            x = abs(enc.center.re)
            intlen = len(str(x.numerator // x.denominator)) if x >= 1 else 1
            dec = max(sig - intlen, 0)
            a, b = _truncate(lo, dec), _truncate(hi, dec)
            if a == b:
                return a
        guard *= 2
        if guard > 10 * sig + 100:
            raise ArithmeticError("digits undecidable at this precision (value too close to a "
                                  "decimal boundary)")
