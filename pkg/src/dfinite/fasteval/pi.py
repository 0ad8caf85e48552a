"""Digits of pi from the Chudnovsky series summed by binary splitting."""

from __future__ import annotations

from gmpy2 import mpq, mpz

from ..exact import GaussRat
from .enclosure import certified_digits, Enclosure, sqrt_down, sqrt_up
from .tree import product_range

A, B, C = 13591409, 545140134, 640320
C3_24 = mpz(C) ** 3 // 24


def chudnovsky_terms(p: int) -> int:
    """Each term contributes a little over 14 digits."""
    return -(-p // 14) + 1


def _split(a: int, b: int):
    """(P, Q, T) for the terms a..b-1 in the usual binary-splitting layout."""
    if b - a == 1:
        if a == 0:
            P = Q = mpz(1)
        else:
            P = mpz(6 * a - 5) * (2 * a - 1) * (6 * a - 1)
            Q = mpz(a) ** 3 * C3_24
        T = P * (A + B * a)
        if a & 1:
            T = -T
        return P, Q, T
    m = (a + b) // 2
    P1, Q1, T1 = _split(a, m)
    P2, Q2, T2 = _split(m, b)
    return P1 * P2, Q1 * Q2, T1 * Q2 + P1 * T2


def chudnovsky_pi(p: int) -> Enclosure:
    """Enclosure of pi with radius below 10^-p."""
    if p < 1:
        raise ValueError("precision must be positive")
    N = chudnovsky_terms(p)
    P, Q, T = _split(0, N)
    S = mpq(T, Q)  # sum of the first N terms (without the 12 / C^(3/2) factor)
    # |term_N| = P(0,N+1)/Q(0,N+1) (A + B N), and consecutive ratios are below
    # 2 * 1728 / C^3 from N on, giving a geometric remainder bound.
    PN = P * (6 * N - 5) * (2 * N - 1) * (6 * N - 1)
    QN = Q * mpz(N) ** 3 * C3_24
    tN = mpq(PN * (A + B * N), QN)
    ratio = mpq(2 * 1728, mpz(C) ** 3)
    tail = tN / (1 - ratio)
    lo_s, hi_s = S - tail, S + tail
    bits = int(p * 3.33) + 40
    root_lo = sqrt_down(mpq(10005), bits)
    root_hi = sqrt_up(mpq(10005), bits)
    lo = 426880 * root_lo / hi_s
    hi = 426880 * root_hi / lo_s
    return Enclosure.around(GaussRat((lo + hi) / 2), (hi - lo) / 2, bits)


def pi_digits(p: int) -> str:
    """pi to p significant digits, every one certified."""
    return certified_digits(chudnovsky_pi, p)
