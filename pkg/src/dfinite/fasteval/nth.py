"""N-th term of a P-recursive sequence by binary splitting of the companion matrix."""

from __future__ import annotations

from gmpy2 import mpq

from ..exact import GaussRat, Poly
from ..exact.roots import integer_roots
from ..holonomic import PRecSequence, SingularIndexError
from .tree import MatFactorial, product_tree, to_exact


def companion_factorial(seq: PRecSequence, lo: int, hi: int) -> MatFactorial:
    """Matrices C(n) with (u_(n+1), ..., u_(n+r))^T = C(n) (u_n, ..., u_(n+r-1))^T.

    The factorial runs over n = lo+1 .. hi, so indices are shifted by one:
    the leaf at k encodes the step from n = k-1 to n = k.
    """
    R = seq.ann
    r = R.order
    F = seq.field
    polys = [c.num.scale(c.field.one / c.den.lc) for c in R.coeffs]
    shifted = [p.shift(F(-1)) for p in polys]
    lead = shifted[r]
    zero = Poly.zero(F)
    rows = []
    for i in range(r - 1):
        rows.append([lead if j == i + 1 else zero for j in range(r)])
    rows.append([-shifted[j] for j in range(r)])
    return MatFactorial(rows, lo, hi, den=lead)


def nth_term(seq: PRecSequence, N: int, reduced: bool = True):
    """u_N exactly; with ``reduced=False`` returns the unreduced pair (num, den)."""
    if N < 0:
        raise ValueError("index must be nonnegative")
    init = seq.initial
    if N < len(init):
        v = init[N]
        return v if reduced else (v, 1)
    if seq.field.params:
        # parameter coefficients are not integer matrices: plain unrolling
        v = nth_terms_naive(seq, N)
        return v if reduced else (v, 1)
    r = seq.order
    lead = seq.ann.lc.num
    for t in integer_roots(lead):
        if len(init) <= t + r <= N:
            raise SingularIndexError(int(t + r))
    n0 = len(init) - r
    # apply steps n0 -> N - r + 1
    M = companion_factorial(seq, n0, N - r + 1)
    P, d = product_tree(M)
    start = init[n0:]
    num = 0
    for j in range(r):
        c = to_exact(P[r - 1][j])
        if c and start[j]:
            num = num + c * start[j]
    if reduced:
        return seq.field(num) / d if num else seq.field.zero
    return num, d


def nth_terms_naive(seq: PRecSequence, N: int):
    from ..holonomic import unroll

    return unroll(seq, N)[N]
