"""Matrix factorials A(hi) A(hi-1) ... A(lo+1) by balanced product trees."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from gmpy2 import mpq, mpz

from ..exact import GaussRat, Poly, QQ


class GInt:
    """Gaussian integer re + im*i with mpz parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = mpz(re)
        self.im = mpz(im)

    def __add__(self, o):
        if isinstance(o, GInt):
            return GInt(self.re + o.re, self.im + o.im)
        return GInt(self.re + o, self.im)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, GInt):
            return GInt(self.re - o.re, self.im - o.im)
        return GInt(self.re - o, self.im)

    def __rsub__(self, o):
        return GInt(o - self.re, -self.im)

    def __neg__(self):
        return GInt(-self.re, -self.im)

    def __mul__(self, o):
        if isinstance(o, GInt):
            a, b, c, d = self.re, self.im, o.re, o.im
            return GInt(a * c - b * d, a * d + b * c)
        return GInt(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, GInt):
            return self.re == o.re and self.im == o.im
        return not self.im and self.re == o

    def __hash__(self):
        return hash((self.re, self.im))

    def conj(self):
        return GInt(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GInt({self.re}, {self.im})"

    def __reduce__(self):
        return (GInt, (int(self.re), int(self.im)))


def to_exact(x):
    """mpz/GInt to mpq/GaussRat."""
    if isinstance(x, GInt):
        return GaussRat(x.re, x.im)
    return mpq(x)


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(m):
            acc = 0
            for t in range(k):
                a = Ai[t]
                if a:
                    b = B[t][j]
                    if b:
                        acc = a * b + acc
            row.append(acc)
        out.append(row)
    return out


def identity(n: int):
    return [[mpz(1) if i == j else mpz(0) for j in range(n)] for i in range(n)]


class IntPolyMatrix:
    """Picklable leaf generator: integer (or Gaussian integer) polynomial matrix plus
    an integer polynomial denominator, evaluated at integer n."""

    def __init__(self, entries, den):
        # entries[i][j] and den are lists of mpz / GInt coefficients, low degree first
        self.entries = entries
        self.den = den

    @staticmethod
    def _ev(c, n):
        acc = 0
        for a in reversed(c):
            acc = acc * n + a
        return acc

    def __call__(self, n: int):
        n = mpz(n)
        return ([[self._ev(c, n) for c in row] for row in self.entries], self._ev(self.den, n))


def _tree(leaf: Callable, lo: int, hi: int):
    """Product leaf(hi) ... leaf(lo+1) as (matrix, denominator)."""
    if hi - lo == 1:
        return leaf(hi)
    if hi - lo <= 0:
        raise ValueError("empty range")
    mid = (lo + hi) // 2
    L, dl = _tree(leaf, lo, mid)
    R, dr = _tree(leaf, mid, hi)
    return mat_mul(R, L), dl * dr


def _tree_job(args):
    leaf, lo, hi = args
    return _tree(leaf, lo, hi)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("DFIN_THREADS", "1")))
    except ValueError:
        return 1


def product_range(leaf: Callable, lo: int, hi: int, dim: int, workers: int | None = None):
    """(M, d) with leaf(hi)...leaf(lo+1) = M / d; identity for an empty range.

    With ``workers > 1`` the range is cut into chunks whose products are computed in
    separate processes and combined; associativity makes the result identical.
    """
    if hi <= lo:
        return identity(dim), mpz(1)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or hi - lo < 256:
        return _tree(leaf, lo, hi)
    cuts = [lo + (hi - lo) * k // workers for k in range(workers + 1)]
    jobs = [(leaf, cuts[k], cuts[k + 1]) for k in range(workers) if cuts[k + 1] > cuts[k]]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(_tree_job, jobs))
    M, d = parts[0]
    for P, dp in parts[1:]:
        M, d = mat_mul(P, M), d * dp
    return M, d


# ---------------------------------------------------------------- public type


def _int_coeffs(polys: Sequence[Poly]):
    """Common scaling making all coefficients (Gaussian) integers: (lists, scale)."""
    from math import lcm

    den = 1
    for p in polys:
        for a in p.c:
            if isinstance(a, GaussRat):
                den = lcm(den, int(a.re.denominator), int(a.im.denominator))
            else:
                den = lcm(den, int(mpq(a).denominator))
    out = []
    for p in polys:
        cs = []
        for a in p.c:
            if isinstance(a, GaussRat):
                re, im = a.re * den, a.im * den
                cs.append(GInt(re.numerator, im.numerator) if im else mpz(re.numerator))
            else:
                cs.append(mpz((mpq(a) * den).numerator))
        out.append(cs)
    return out, mpz(den)


@dataclass(frozen=True)
class MatFactorial:
    """A(hi) A(hi-1) ... A(lo+1) for a square matrix A of polynomials in n,
    optionally divided entrywise by the scalar polynomial ``den``."""

    A: tuple
    lo: int
    hi: int
    den: Poly | None = None

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.A)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "A", rows)
        if self.hi < self.lo:
            raise ValueError("invalid bounds")

    @property
    def dim(self) -> int:
        return len(self.A)

    def leaf(self) -> IntPolyMatrix:
        flat = [p for row in self.A for p in row]
        field_ = flat[0].field if flat else QQ
        den = self.den or Poly.one(field_)
        lists, s = _int_coeffs(flat)
        dl, ds = _int_coeffs([den])
        n = self.dim
        entries = [[[c * ds for c in lists[i * n + j]] for j in range(n)] for i in range(n)]
        return IntPolyMatrix(entries, [c * s for c in dl[0]])

    def naive(self):
        """Left-to-right product as exact rationals (reference implementation)."""
        n = self.dim
        M = [[mpq(1) if i == j else mpq(0) for j in range(n)] for i in range(n)]
        den = self.den
        for k in range(self.lo + 1, self.hi + 1):
            A = [[p.evaluate(p.field(k)) for p in row] for row in self.A]
            if den is not None:
                d = den.evaluate(den.field(k))
                A = [[a / d for a in row] for row in A]
            M = mat_mul(A, M)
        return M


def product_tree(M: MatFactorial, workers: int | None = None):
    """(integer matrix P, integer d) with the matrix factorial equal to P / d."""
    return product_range(M.leaf(), M.lo, M.hi, M.dim, workers)


def as_rational_matrix(P, d):
    return [[to_exact(a) / d for a in row] for row in P]
