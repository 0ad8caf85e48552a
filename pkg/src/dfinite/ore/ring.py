"""Skew polynomial rings F(x)<D; sigma, delta> for differential and shift operators."""

from __future__ import annotations

from typing import Sequence

from ..exact import QQ, Poly, RatFunc, RatFuncField

DIFF = "diff"
SHIFT = "shift"


class OreRing:
    """Ore extension of ``base(var)`` by ``gen``.

    ``kind`` is ``"diff"`` (sigma = id, delta = d/dvar) or ``"shift"``
    (sigma: var -> var + 1, delta = 0).  Shift rings also admit negative powers
    of the generator, stored through an offset on :class:`OrePoly`.
    """

    def __init__(self, kind: str, var: str, gen: str | None = None, base=QQ):
        if kind not in (DIFF, SHIFT):
            raise ValueError(f"unknown Ore ring kind {kind!r}")
        self.kind = kind
        self.var = var
        self.gen = gen or (("D" if kind == DIFF else "S") + var)
        self.base = base
        self.coeff_field = RatFuncField(base, var)

    @classmethod
    def diff(cls, var="x", base=QQ, gen=None):
        return cls(DIFF, var, gen, base)

    @classmethod
    def shift(cls, var="n", base=QQ, gen=None):
        return cls(SHIFT, var, gen, base)

    @property
    def params(self):
        return self.base.params

    def __eq__(self, other):
        return (isinstance(other, OreRing) and self.kind == other.kind
                and self.var == other.var and self.gen == other.gen and self.base == other.base)

    def __hash__(self):
        return hash((self.kind, self.var, self.gen, self.base))

    def __repr__(self):
        return f"OreRing({self.kind!r}, {self.var!r}, {self.gen!r}, {self.base!r})"

    def with_base(self, base) -> "OreRing":
        return OreRing(self.kind, self.var, self.gen, base)

    def is_shift(self) -> bool:
        return self.kind == SHIFT

    # endomorphism data
    def sigma(self, a: RatFunc, k: int = 1) -> RatFunc:
        if self.kind == DIFF or k == 0:
            return a
        return a.shift(k)

    def delta(self, a: RatFunc) -> RatFunc:
        if self.kind == DIFF:
            return a.derivative()
        return self.coeff_field.zero

    # element constructors
    def coerce_coeff(self, a) -> RatFunc:
        return self.coeff_field(a)

    def __call__(self, coeffs, low: int = 0) -> "OrePoly":
        return OrePoly(self, coeffs, low)

    def one(self) -> "OrePoly":
        return OrePoly(self, [self.coeff_field.one])

    def zero(self) -> "OrePoly":
        return OrePoly(self, [])

    def generator(self, power: int = 1) -> "OrePoly":
        F = self.coeff_field
        if power >= 0:
            return OrePoly(self, [F.zero] * power + [F.one])
        if self.kind != SHIFT:
            raise ValueError("negative powers only exist for shift operators")
        return OrePoly(self, [F.one], low=power)

    def var_elem(self) -> "OrePoly":
        return OrePoly(self, [self.coeff_field.gen()])

    def scalar(self, a) -> "OrePoly":
        return OrePoly(self, [self.coeff_field(a)])


class OrePoly:
    """Operator sum_i coeffs[i] * D^(low + i) with rational-function coefficients."""

    __slots__ = ("ring", "coeffs", "low")

    def __init__(self, ring: OreRing, coeffs: Sequence, low: int = 0):
        F = ring.coeff_field
        cs = [F(a) for a in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        if not cs:
            low = 0
        elif low < 0:
            k = 0
            while k < len(cs) and not cs[k] and low + k < 0:
                k += 1
            cs = cs[k:]
            low += k
        if low > 0:
            cs = [F.zero] * low + cs
            low = 0
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "low", low)

    def __setattr__(self, name, value):
        raise AttributeError("OrePoly is immutable")

    def __reduce__(self):
        return (OrePoly, (self.ring, self.coeffs, self.low))

    # shape
    @property
    def order(self) -> int:
        """Highest power of the generator (the degree); -1 for zero."""
        if not self.coeffs:
            return -1
        return self.low + len(self.coeffs) - 1

    deg = order

    @property
    def high(self) -> int:
        return self.order

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_laurent(self) -> bool:
        return self.low < 0

    @property
    def lc(self) -> RatFunc:
        return self.coeffs[-1] if self.coeffs else self.ring.coeff_field.zero

    def coeff(self, power: int) -> RatFunc:
        i = power - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.coeff_field.zero

    def terms(self):
        """Iterate (power, coefficient) over nonzero terms."""
        for i, a in enumerate(self.coeffs):
            if a:
                yield self.low + i, a

    def __eq__(self, other):
        if not isinstance(other, OrePoly):
            if not self.coeffs:
                return other == 0
            return self.low == 0 and len(self.coeffs) == 1 and self.coeffs[0] == other
        return self.ring == other.ring and self.low == other.low and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.low, self.coeffs))

    def _check(self, other: "OrePoly"):
        if other.ring != self.ring:
            raise ValueError("ring mismatch")

    def coerce(self, other) -> "OrePoly":
        if isinstance(other, OrePoly):
            self._check(other)
            return other
        return self.ring.scalar(other)

    # additive structure
    def __neg__(self):
        return OrePoly(self.ring, [-a for a in self.coeffs], self.low)

    def __add__(self, other):
        o = self.coerce(other)
        if not o.coeffs:
            return self
        if not self.coeffs:
            return o
        low = min(self.low, o.low)
        high = max(self.order, o.order)
        F = self.ring.coeff_field
        out = [F.zero] * (high - low + 1)
        for p, a in self.terms():
            out[p - low] = out[p - low] + a
        for p, a in o.terms():
            out[p - low] = out[p - low] + a
        return OrePoly(self.ring, out, low)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self.coerce(other))

    def __rsub__(self, other):
        return self.coerce(other) - self

    def lmul_scalar(self, a) -> "OrePoly":
        """a * self for a coefficient-field element a."""
        a = self.ring.coeff_field(a)
        if not a:
            return self.ring.zero()
        return OrePoly(self.ring, [a * c for c in self.coeffs], self.low)

    # multiplication
    def gen_times(self, k: int = 1) -> "OrePoly":
        """D^k * self."""
        R = self.ring
        if not self.coeffs or k == 0:
            return self
        if R.kind == SHIFT:
            return OrePoly(R, [c.shift(k) for c in self.coeffs], self.low + k)
        if k < 0:
            raise ValueError("negative power of a derivation")
        cur = self
        F = R.coeff_field
        for _ in range(k):
            out = [F.zero] * (len(cur.coeffs) + 1)
            for i, c in enumerate(cur.coeffs):
                if c:
                    out[i + 1] = out[i + 1] + c
                    d = c.derivative()
                    if d:
                        out[i] = out[i] + d
            cur = OrePoly(R, out, cur.low)
        return cur

    def __mul__(self, other):
        if not isinstance(other, OrePoly):
            return self * self.ring.scalar(other)
        self._check(other)
        R = self.ring
        if not self.coeffs or not other.coeffs:
            return R.zero()
        if R.kind == SHIFT:
            result = R.zero()
            for p, a in self.terms():
                result = result + other.gen_times(p).lmul_scalar(a)
            return result
        result = R.zero()
        cur = other.gen_times(self.low)
        for i, a in enumerate(self.coeffs):
            if i:
                cur = cur.gen_times(1)
            if a:
                result = result + cur.lmul_scalar(a)
        return result

    def __rmul__(self, other):
        return self.ring.scalar(other) * self

    def __pow__(self, k: int) -> "OrePoly":
        result = self.ring.one()
        for _ in range(k):
            result = result * self
        return result

    # coefficient views
    def is_polynomial(self) -> bool:
        return all(c.den.deg == 0 for c in self.coeffs)

    def poly_coeffs(self) -> list[Poly]:
        """Coefficients as polynomials; requires a denominator-free operator."""
        out = []
        for c in self.coeffs:
            if c.den.deg != 0:
                raise ValueError("operator has rational-function coefficients; normalize it first")
            out.append(c.num.scale(c.field.one / c.den.lc) if c.den.lc != 1 else c.num)
        return out

    def map_coeffs(self, f) -> "OrePoly":
        return OrePoly(self.ring, [f(c) for c in self.coeffs], self.low)

    def normalize(self) -> "OrePoly":
        return normal_form(self)

    def __repr__(self):
        return f"OrePoly({self.ring.gen}: {[str(c) for c in self.coeffs]}, low={self.low})"

    def __str__(self):
        from ..cli.printing import format_operator

        return format_operator(self)


def clear_laurent(P: OrePoly) -> OrePoly:
    """Left-multiply by S^(-low) so that no negative powers remain."""
    if P.low >= 0:
        return P
    return P.ring.generator(-P.low) * P


def normal_form(P: OrePoly, keep_laurent: bool = False, poly_content: bool = True) -> OrePoly:
    """Canonical left-associate: polynomial coefficients, no content, positive sign.

    With ``keep_laurent`` the negative generator powers of a shift operator are
    kept instead of being cleared by a left power of the generator.  With
    ``poly_content=False`` a polynomial factor shared by all coefficients is kept;
    recurrences need this because such a factor carries the equations at its roots.
    """
    if not P.coeffs:
        return P
    if not keep_laurent:
        P = clear_laurent(P)
    F = P.ring.coeff_field
    lam = F.primitive_scale(list(reversed(P.coeffs)), poly_content=poly_content)
    return P.lmul_scalar(lam)


def ore_mul(A: OrePoly, B: OrePoly) -> OrePoly:
    """Product A*B in the common Ore ring."""
    return A * B


def ore_apply(A: OrePoly, target: Sequence, start: int | None = None):
    """Apply an operator to a truncated power series or a sequence prefix.

    Differential case: ``target`` lists Taylor coefficients f_0..f_{N-1} at 0 and the
    result is the list of the first N - order coefficients of A(f).  Coefficients
    of A must be polynomials.

    Shift case: ``target`` lists u_0..u_{L-1}; the result lists (A u)_n for
    n = start, ..., L - 1 - order, where ``start`` defaults to max(0, -low).
    Terms with a negative index are read as zero.
    """
    R = A.ring
    target = list(target)
    if R.kind == DIFF:
        if A.low != 0:
            raise ValueError("Laurent differential operators are not supported")
        polys = A.poly_coeffs()
        N = len(target)
        m = A.order
        L = N - m
        if L < 0:
            raise ValueError("insufficient terms")
        zero = R.base.zero
        out = [zero] * L
        for i, p in enumerate(polys):
            if not p:
                continue
            # coefficients of D^i f
            d = []
            for k in range(N - i):
                v = target[k + i]
                if v:
                    f = 1
                    for t in range(k + 1, k + i + 1):
                        f *= t
                    v = v * f
                d.append(v)
            for e, pc in enumerate(p.c):
                if not pc:
                    continue
                for k in range(L - e):
                    if k < len(d) and d[k]:
                        out[k + e] = out[k + e] + pc * d[k]
        return out
    n0 = max(0, -A.low) if start is None else start
    L = len(target)
    hi = L - 1 - A.order
    if hi < n0:
        raise ValueError("insufficient terms")
    out = []
    for n in range(n0, hi + 1):
        acc = R.base.zero
        for p, c in A.terms():
            idx = n + p
            if idx < 0:
                continue
            u = target[idx]
            if u:
                acc = acc + c(n) * u
        out.append(acc)
    return out
