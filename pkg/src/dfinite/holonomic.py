"""D-finite functions and P-recursive sequences: annihilator plus initial data."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from gmpy2 import mpq

from .convert import taylor_morphism_raw
from .exact import GaussRat, IncrementalDependency, Poly, QQ, QQI, RatFunc, join_fields
from .exact.roots import integer_roots
from .ore import OrePoly, OreRing, normal_form, ore_lclm


class SingularPointError(ArithmeticError):
    """The requested operation needs an ordinary point."""


class SingularIndexError(ArithmeticError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"singular index {index}, extend initial terms")


# ---------------------------------------------------------------- operators


def translate_diffop(L: OrePoly, a) -> OrePoly:
    """L(x + a, Dx): the operator describing solutions around the point a."""
    if not a:
        return L
    base = L.ring.base
    if isinstance(a, GaussRat) and a.im != 0 and not base.is_complex:
        base = QQI
    ring = L.ring.with_base(base)
    polys = normal_form(L).poly_coeffs()
    shifted = [RatFunc.from_poly(Poly(p.c, base).shift(base(a))) for p in polys]
    return OrePoly(ring, shifted)


def leading_poly(L: OrePoly) -> Poly:
    return normal_form(L).poly_coeffs()[-1]


def is_ordinary(L: OrePoly, a=0) -> bool:
    p = leading_poly(L)
    if isinstance(a, GaussRat) and a.im != 0:
        return bool(Poly(p.c, QQI).evaluate(a))
    return bool(p.evaluate(p.field(a)))


def _local_rec(L: OrePoly, a):
    """Laurent recurrence for Taylor coefficients at a, plus its extreme shifts."""
    La = translate_diffop(L, a)
    R = taylor_morphism_raw(La)
    return normal_form(R, keep_laurent=True, poly_content=False)


def _rec_data(R: OrePoly):
    """(low, high, polys) for a recurrence with polynomial coefficients."""
    polys = {p: c.num.scale(c.field.one / c.den.lc) for p, c in R.terms()}
    return R.low, R.order, polys


def singular_indices(R: OrePoly) -> list[int]:
    """Indices m >= 0 at which the Laurent recurrence cannot solve for u_m."""
    low, high, polys = _rec_data(R)
    lead = polys[high]
    return [r + high for r in integer_roots(lead) if r + high >= 0]


def required_prefix(L: OrePoly, a=0) -> int:
    R = _local_rec(L, a)
    sing = singular_indices(R)
    return max([L.order] + [m + 1 for m in sing])


def extend_series(R: OrePoly, prefix: Sequence, N: int, field) -> list:
    """Extend a Taylor prefix with the Laurent recurrence R (u_m = 0 for m < 0)."""
    low, high, polys = _rec_data(R)
    u = list(prefix)
    lead = polys[high]
    others = [(j, polys[j]) for j in sorted(polys) if j != high]
    while len(u) < N:
        m = len(u)
        n = m - high
        d = lead.evaluate(lead.field(n))
        if not d:
            raise SingularIndexError(m)
        acc = field.zero
        for j, p in others:
            idx = n + j
            if idx < 0:
                continue
            v = u[idx]
            if v:
                acc = acc + p.evaluate(p.field(n)) * v
        u.append(-acc / d)
    return u[:N] if N < len(u) else u


def check_prefix(R: OrePoly, prefix: Sequence) -> bool:
    """All recurrence equations involving only the stored prefix hold."""
    low, high, polys = _rec_data(R)
    L = len(prefix)
    for n in range(-high, L - high):
        acc = 0
        for j, p in polys.items():
            idx = n + j
            if 0 <= idx < L:
                v = prefix[idx]
                if v:
                    acc = acc + p.evaluate(p.field(n)) * v
        if acc:
            return False
    return True


# ---------------------------------------------------------------- functions


def _point(a):
    if isinstance(a, GaussRat):
        return a if a.im != 0 else a.re
    if isinstance(a, str):
        from .cli.parse import parse_scalar

        return _point(parse_scalar(a, QQI))
    return mpq(a)


@dataclass(frozen=True, eq=False)
class DFiniteFunction:
    """Power series at ``point`` given by an annihilator and Taylor coefficients.

    ``initial`` holds f_0..f_{s-1}, enough to determine the series through the
    local recurrence.  ``radius`` is None for exact data, otherwise a rational
    bound on the error of every stored coefficient.
    """

    ann: OrePoly
    initial: tuple
    point: object = mpq(0)
    radius: object = None
    check: bool = dc_field(default=True, repr=False)

    def __post_init__(self):
        ann = normal_form(self.ann)
        object.__setattr__(self, "ann", ann)
        object.__setattr__(self, "point", _point(self.point))
        F = self.field
        object.__setattr__(self, "initial", tuple(F(v) for v in self.initial))
        need = required_prefix(ann, self.point)
        if len(self.initial) < need:
            raise ValueError(f"{need} initial coefficients required, got {len(self.initial)}")
        if self.check and self.radius is None and not check_prefix(self.local_recurrence(),
                                                                   self.initial):
            raise ValueError("initial coefficients violate the differential equation")

    @classmethod
    def from_derivatives(cls, ann, values, point=0):
        """Build from f(a), f'(a), f''(a), ... instead of Taylor coefficients."""
        coeffs = []
        fact = 1
        for k, v in enumerate(values):
            if k:
                fact *= k
            coeffs.append(v / mpq(fact) if not isinstance(v, int) else mpq(v, fact))
        return cls(ann, tuple(coeffs), point)

    @property
    def field(self):
        F = self.ann.ring.base
        if isinstance(self.point, GaussRat) and self.point.im != 0 and not F.is_complex:
            return QQI
        if self.radius is not None and not F.is_complex:
            return QQI
        return F

    @property
    def order(self) -> int:
        return self.ann.order

    def local_recurrence(self) -> OrePoly:
        return _local_rec(self.ann, self.point)

    def series(self, N: int) -> list:
        """Taylor coefficients f_0..f_{N-1} at the expansion point."""
        if N <= len(self.initial):
            return list(self.initial[:N])
        return extend_series(self.local_recurrence(), self.initial, N, self.field)

    def is_ordinary(self) -> bool:
        return is_ordinary(self.ann, self.point)

    # arithmetic
    def _same_point(self, other: "DFiniteFunction"):
        if self.point != other.point:
            raise ValueError("functions expanded at different points")
        if self.ann.ring != other.ann.ring:
            raise ValueError("ring mismatch")

    def __add__(self, other):
        return dfinite_add(self, _coerce_function(self, other))

    __radd__ = __add__

    def __neg__(self):
        return DFiniteFunction(self.ann, tuple(-v for v in self.initial), self.point,
                               self.radius, check=False)

    def __sub__(self, other):
        return dfinite_add(self, -_coerce_function(self, other))

    def __rsub__(self, other):
        return dfinite_add(_coerce_function(self, other), -self)

    def scale(self, c) -> "DFiniteFunction":
        c = self.field(c)
        if not c:
            return constant_function(0, self.ann.ring, self.point)
        return DFiniteFunction(self.ann, tuple(c * v for v in self.initial), self.point,
                               self.radius, check=False)

    def __mul__(self, other):
        if isinstance(other, DFiniteFunction):
            return dfinite_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = constant_function(1, self.ann.ring, self.point)
        for _ in range(k):
            result = result * self
        return result

    def __repr__(self):
        return (f"DFiniteFunction(ann={self.ann}, point={self.point}, "
                f"initial={[str(v) for v in self.initial]})")


def constant_function(c, ring: OreRing, point=0) -> DFiniteFunction:
    """The constant c, annihilated by Dx (or by 1 when c = 0)."""
    c = ring.base(c) if not isinstance(point, GaussRat) else c
    if not c:
        return DFiniteFunction(ring.generator(1), (0,), point)
    return DFiniteFunction(ring.generator(1), (c,), point)


def _coerce_function(f: DFiniteFunction, other) -> DFiniteFunction:
    if isinstance(other, DFiniteFunction):
        return other
    return constant_function(other, f.ann.ring, f.point)


def dfinite_add(f: DFiniteFunction, g: DFiniteFunction) -> DFiniteFunction:
    """Sum: annihilator lclm(f.ann, g.ann), initial data by coefficient-wise sums."""
    f._same_point(g)
    L = ore_lclm(f.ann, g.ann)
    if not is_ordinary(L, f.point):
        raise SingularPointError("expansion point is singular for the lclm")
    s = required_prefix(L, f.point)
    a, b = f.series(s), g.series(s)
    return DFiniteFunction(L, tuple(x + y for x, y in zip(a, b)), f.point)


def _derive_vector(vec: dict, reducers, dims):
    """Derivative of sum c_idx * prod_t f_t^(idx_t) reduced by the equations."""
    out: dict = {}
    for idx, c in vec.items():
        dc = c.derivative()
        if dc:
            out[idx] = out.get(idx, 0) + dc if idx in out else dc
        for t in range(len(idx)):
            j = idx[t] + 1
            if j < dims[t]:
                nidx = idx[:t] + (j,) + idx[t + 1:]
                out[nidx] = out[nidx] + c if nidx in out else c
            else:
                # f_t^(r_t) = sum_k red[k] f_t^(k)
                for k, rk in enumerate(reducers[t]):
                    if rk:
                        nidx = idx[:t] + (k,) + idx[t + 1:]
                        term = c * rk
                        out[nidx] = out[nidx] + term if nidx in out else term
    return {k: v for k, v in out.items() if v}


def _reducer(L: OrePoly):
    """Coefficients expressing the top derivative through lower ones."""
    lc = L.lc
    return [-(c / lc) for c in L.coeffs[:-1]]


def confinement_vectors(ops: Sequence[OrePoly], max_order: int | None = None,
                        symmetric: bool = False):
    """Coordinate vectors of h, h', h'', ... for h = f_1 * ... * f_k.

    Returns (vectors, basis, relation) where ``relation`` are the coefficients of
    the first linear dependency found.  With ``symmetric`` (all factors equal),
    coordinates are collected on sorted index tuples, matching the basis of
    monomials y^a y'^b ... of a single function.
    """
    ring = ops[0].ring
    F = ring.coeff_field
    dims = [L.order for L in ops]
    reducers = [_reducer(L) for L in ops]
    if symmetric:
        from itertools import combinations_with_replacement

        basis = list(combinations_with_replacement(range(dims[0]), len(ops)))
    else:
        from itertools import product

        basis = list(product(*[range(d) for d in dims]))
    pos = {b: i for i, b in enumerate(basis)}

    def coords(vec):
        out = [F.zero] * len(basis)
        for idx, c in vec.items():
            key = tuple(sorted(idx)) if symmetric else idx
            out[pos[key]] = out[pos[key]] + c
        return out

    vec = {tuple(0 for _ in ops): F.one}
    dep = IncrementalDependency(F)
    vectors = []
    limit = len(basis) if max_order is None else max_order
    for k in range(limit + 1):
        v = coords(vec)
        vectors.append(v)
        rel = dep.add(v)
        if rel is not None:
            return vectors, basis, rel
        vec = _derive_vector(vec, reducers, dims)
    raise ArithmeticError("no relation found within the order bound")


def product_annihilator(A: OrePoly, B: OrePoly, symmetric: bool = False) -> OrePoly:
    """Annihilator of f*g from annihilators of f and g (diff or shift ring)."""
    A, B = normal_form(A), normal_form(B)
    if A.ring.is_shift():
        return _rec_product(A, B)
    if A.order == 0 or B.order == 0:
        return A.ring.one()
    _, _, rel = confinement_vectors([A, B], symmetric=symmetric and A == B)
    return normal_form(OrePoly(A.ring, rel))


def dfinite_mul(f: DFiniteFunction, g: DFiniteFunction) -> DFiniteFunction:
    """Product via the left kernel of the confinement matrix."""
    f._same_point(g)
    L = product_annihilator(f.ann, g.ann, symmetric=f is g)
    if L.order == 0:
        raise ArithmeticError("trivial annihilator")
    if not is_ordinary(L, f.point):
        raise SingularPointError("expansion point is singular for the product annihilator")
    s = required_prefix(L, f.point)
    a, b = f.series(s), g.series(s)
    prod = [sum((a[i] * b[k - i] for i in range(k + 1)), f.field.zero) for k in range(s)]
    return DFiniteFunction(L, tuple(prod), f.point)


@dataclass(frozen=True)
class ProofResult:
    proved: bool
    order: int
    checked: int
    annihilator_order: int
    first_nonzero: int | None = None

    def __bool__(self):
        return self.proved

    def report(self) -> str:
        if self.proved:
            return f"PROVED, order {self.order}, {self.checked} coefficients checked"
        return (f"DISPROVED, coefficient {self.first_nonzero} differs "
                f"({self.checked} coefficients checked)")


def is_zero(f: DFiniteFunction, checks: int | None = None) -> bool:
    """Decide f = 0 from the first Taylor coefficients at an ordinary point."""
    if not f.is_ordinary():
        raise SingularPointError("is_zero needs an ordinary expansion point")
    n = max(f.order, checks or 0)
    return all(not v for v in f.series(n))


def prove_equal(f: DFiniteFunction, g: DFiniteFunction) -> ProofResult:
    """Prove f = g by checking order(f.ann) + order(g.ann) coefficients of f - g."""
    h = f - g
    if not h.is_ordinary():
        raise SingularPointError("expansion point is singular for the difference")
    bound = f.order + g.order
    n = max(bound, h.order)
    coeffs = h.series(n)
    bad = next((i for i, v in enumerate(coeffs) if v), None)
    return ProofResult(bad is None, bound, n, h.order, bad)


# ---------------------------------------------------------------- sequences


def rec_required_prefix(R: OrePoly) -> int:
    R = normal_form(R, poly_content=False)
    r = R.order
    lead = R.lc.num
    roots = [t for t in integer_roots(lead) if t >= 0]
    return r + 1 + max(roots) if roots else r


@dataclass(frozen=True, eq=False)
class PRecSequence:
    """Sequence u_0, u_1, ... annihilated by ``ann`` with stored initial terms."""

    ann: OrePoly
    initial: tuple
    check: bool = dc_field(default=True, repr=False)

    def __post_init__(self):
        ann = normal_form(self.ann, poly_content=False)
        object.__setattr__(self, "ann", ann)
        F = ann.ring.base
        object.__setattr__(self, "initial", tuple(F(v) for v in self.initial))
        need = rec_required_prefix(ann)
        if len(self.initial) < need:
            raise ValueError(f"{need} initial terms required, got {len(self.initial)}")
        if self.check and not self._prefix_ok():
            raise ValueError("initial terms violate the recurrence")

    def _prefix_ok(self) -> bool:
        r = self.ann.order
        vals = self.initial
        for n in range(0, len(vals) - r):
            acc = 0
            for j, c in self.ann.terms():
                v = vals[n + j]
                if v:
                    acc = acc + c(n) * v
            if acc:
                return False
        return True

    @property
    def field(self):
        return self.ann.ring.base

    @property
    def order(self) -> int:
        return self.ann.order

    def terms(self, N: int) -> list:
        """u_0..u_{N-1}."""
        return unroll(self, N - 1)[:N] if N > 0 else []

    def __getitem__(self, n: int):
        if n < len(self.initial):
            return self.initial[n]
        return unroll(self, n)[n]

    def shift(self, k: int) -> "PRecSequence":
        """The sequence v_n = u_(n+k) for k >= 0."""
        if k < 0:
            raise ValueError("only nonnegative shifts are supported")
        R = self.ann
        ann = OrePoly(R.ring, [c.shift(k) for c in R.coeffs], R.low)
        need = max(rec_required_prefix(ann), len(self.initial) - k)
        vals = unroll(self, need + k - 1)[k:need + k]
        return PRecSequence(ann, tuple(vals))

    def __add__(self, other):
        return rec_add(self, _coerce_seq(self, other))

    __radd__ = __add__

    def __neg__(self):
        return PRecSequence(self.ann, tuple(-v for v in self.initial), check=False)

    def __sub__(self, other):
        return rec_add(self, -_coerce_seq(self, other))

    def __mul__(self, other):
        if isinstance(other, PRecSequence):
            return rec_mul(self, other)
        c = self.field(other)
        return PRecSequence(self.ann, tuple(c * v for v in self.initial), check=False)

    __rmul__ = __mul__

    def __repr__(self):
        return f"PRecSequence(ann={self.ann}, initial={[str(v) for v in self.initial]})"


def constant_sequence(c, ring: OreRing) -> PRecSequence:
    return PRecSequence(ring.generator(1) - ring.one(), (c,))


def _coerce_seq(a: PRecSequence, other) -> PRecSequence:
    if isinstance(other, PRecSequence):
        return other
    return constant_sequence(other, a.ann.ring)


def unroll(seq: PRecSequence, N: int) -> list:
    """Terms u_0..u_N, solving the recurrence for the highest shift."""
    u = list(seq.initial)
    if N < len(u):
        return u[:N + 1]
    R = seq.ann
    r = R.order
    F = seq.field
    polys = [c.num.scale(c.field.one / c.den.lc) for c in R.coeffs]
    lead = polys[r]
    while len(u) <= N:
        n = len(u) - r
        d = lead.evaluate(F(n))
        if not d:
            raise SingularIndexError(n + r)
        acc = F.zero
        for j in range(r):
            p = polys[j]
            if p:
                v = u[n + j]
                if v:
                    acc = acc + p.evaluate(F(n)) * v
        u.append(-acc / d)
    return u


def _rec_product(A: OrePoly, B: OrePoly) -> OrePoly:
    """Annihilator of (u_n v_n) by confinement on the basis u_(n+i) v_(n+j)."""
    ring = A.ring
    F = ring.coeff_field
    ra, rb = A.order, B.order
    if ra == 0 or rb == 0:
        return ring.one()
    red_a, red_b = _reducer(A), _reducer(B)
    basis = [(i, j) for i in range(ra) for j in range(rb)]
    pos = {b: k for k, b in enumerate(basis)}

    def shift_vec(vec):
        out = {}
        for (i, j), c in vec.items():
            c = c.shift(1)
            ea = {i + 1: F.one} if i + 1 < ra else {k: rk.shift(0) for k, rk in enumerate(red_a) if rk}
            eb = {j + 1: F.one} if j + 1 < rb else {k: rk for k, rk in enumerate(red_b) if rk}
            for ii, ca in ea.items():
                for jj, cb in eb.items():
                    t = c * ca * cb
                    out[(ii, jj)] = out[(ii, jj)] + t if (ii, jj) in out else t
        return {k: v for k, v in out.items() if v}

    vec = {(0, 0): F.one}
    dep = IncrementalDependency(F)
    for _ in range(len(basis) + 1):
        v = [F.zero] * len(basis)
        for k, c in vec.items():
            v[pos[k]] = c
        rel = dep.add(v)
        if rel is not None:
            return normal_form(OrePoly(ring, rel), poly_content=False)
        vec = shift_vec(vec)
    raise ArithmeticError("no relation found")


def rec_add(a: PRecSequence, b: PRecSequence) -> PRecSequence:
    if a.ann.ring != b.ann.ring:
        raise ValueError("ring mismatch")
    L = ore_lclm(a.ann, b.ann, poly_content=False)
    s = max(rec_required_prefix(L), len(a.initial), len(b.initial))
    ua, ub = unroll(a, s - 1), unroll(b, s - 1)
    return PRecSequence(L, tuple(x + y for x, y in zip(ua, ub)))


def rec_mul(a: PRecSequence, b: PRecSequence) -> PRecSequence:
    if a.ann.ring != b.ann.ring:
        raise ValueError("ring mismatch")
    L = _rec_product(a.ann, b.ann)
    s = max(rec_required_prefix(L), len(a.initial), len(b.initial))
    ua, ub = unroll(a, s - 1), unroll(b, s - 1)
    return PRecSequence(L, tuple(x * y for x, y in zip(ua, ub)))


def rec_is_zero(a: PRecSequence) -> bool:
    """A P-recursive sequence is zero iff its stored prefix is zero."""
    return all(not v for v in a.initial)


def rec_prove_equal(a: PRecSequence, b: PRecSequence) -> ProofResult:
    d = a - b
    n = len(d.initial)
    bad = next((i for i, v in enumerate(d.initial) if v), None)
    return ProofResult(bad is None, a.order + b.order, n, d.order, bad)
