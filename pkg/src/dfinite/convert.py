"""Ring morphisms between differential operators and recurrences."""

from __future__ import annotations

from typing import Sequence

from .exact import Poly, RatFunc
from .ore import OreFraction, OrePoly, OreRing, frac_add, frac_mul, normal_form


def _rising(field, var_shift: int, i: int) -> Poly:
    """(n + var_shift + 1)(n + var_shift + 2)...(n + var_shift + i) as a polynomial in n."""
    p = Poly.one(field)
    for t in range(1, i + 1):
        p = p * Poly([field(var_shift + t), field.one], field)
    return p


def rec_ring_for(L: OrePoly, var: str = "n", gen: str | None = None) -> OreRing:
    return OreRing.shift(var, L.ring.base, gen or "S" + var)


def taylor_morphism_raw(L: OrePoly, ring: OreRing | None = None) -> OrePoly:
    """Image of L under Dx -> (n+1) Sn, x -> Sn^-1, before normalization.

    The term x^k Dx^i maps to (n-k+1)...(n-k+i) Sn^(i-k).  The result satisfies
    [x^n] L(f) = (image applied to the coefficient sequence)_n for every integer n
    when coefficients with negative index are read as zero.
    """
    ring = ring or rec_ring_for(L)
    F = L.ring.base
    polys = normal_form(L).poly_coeffs() if not L.is_polynomial() else L.poly_coeffs()
    terms: dict[int, Poly] = {}
    for i, p in enumerate(polys):
        for k, a in enumerate(p.c):
            if not a:
                continue
            power = i - k
            term = _rising(F, -k, i).scale(a)
            terms[power] = terms.get(power, Poly.zero(F)) + term
    if not terms:
        return ring.zero()
    low = min(terms)
    high = max(terms)
    coeffs = [RatFunc.from_poly(terms.get(p, Poly.zero(F))) for p in range(low, high + 1)]
    return OrePoly(ring, coeffs, low)


def taylor_morphism(L: OrePoly, var: str = "n") -> OrePoly:
    """Recurrence on Taylor coefficients, kept with its negative shifts.

    The result is content free with positive leading sign; use
    :func:`dfinite.ore.normal_form` to clear the negative powers.
    """
    return normal_form(taylor_morphism_raw(L, rec_ring_for(L, var)), keep_laurent=True)


def _theta_poly(a: Poly, h: int, D: OreRing) -> OrePoly:
    """a(theta - h) with theta = x*Dx, as a differential operator."""
    theta = D.var_elem() * D.generator(1) - D.scalar(h)
    acc = D.zero()
    for c in reversed(a.c):
        acc = acc * theta + D.scalar(c)
    return acc


def inverse_morphism_raw(R: OrePoly, var: str = "x") -> tuple[OrePoly, int]:
    """(M, h) with M = x^h * phi^-1(R), phi^-1: n -> x*Dx, Sn -> x^-1, h = max shift."""
    D = OreRing.diff(var, R.ring.base, "D" + var)
    h = R.order
    M = D.zero()
    for j, c in R.terms():
        if c.den.deg != 0:
            raise ValueError("recurrence must have polynomial coefficients")
        a = c.num.scale(c.field.one / c.den.lc)
        M = M + _theta_poly(a, h, D) * D.var_elem() ** (h - j) if h - j >= 0 else M
    return M, h


def boundary_polynomial(R: OrePoly, initial: Sequence, var: str = "x") -> Poly:
    """Polynomial P with x^h phi^-1(R) applied to sum u_n x^n equal to P."""
    F = R.ring.base
    h = R.order
    coeffs = []
    for m in range(-h, 0):
        acc = F.zero
        for j, c in R.terms():
            idx = m + j
            if 0 <= idx:
                if idx >= len(initial):
                    raise ValueError("not enough initial terms for the boundary check")
                u = initial[idx]
                if u:
                    acc = acc + c(m) * u
        coeffs.append(acc)
    return Poly(coeffs, F)


def rec_to_diffop(R: OrePoly, initial: Sequence | None = None, var: str = "x") -> OrePoly:
    """Differential operator annihilating the generating function of solutions of R.

    When the recurrence R (valid for all n >= 0) is mapped back by n -> x*Dx,
    Sn -> x^-1 and cleared by x^h, the generating function f satisfies
    M f = P for a polynomial P of degree < h built from the first terms.  With
    initial terms P is computed; the result is M when P = 0 and
    (P*Dx - P')*M otherwise.  Without initial terms, Dx^h * M is returned unless
    every boundary contribution vanishes identically.
    """
    if R.low < 0:
        R = normal_form(R)
    M, h = inverse_morphism_raw(R, var)
    D = M.ring
    if initial is not None:
        P = boundary_polynomial(R, initial, var)
        if P.is_zero():
            return normal_form(M)
        left = OrePoly(D, [RatFunc.from_poly(-P.derivative()), RatFunc.from_poly(P)])
        return normal_form(left * M)
    # does any boundary coefficient depend on the sequence?
    for m in range(-h, 0):
        for j, c in R.terms():
            if m + j >= 0 and c(m):
                return normal_form(D.generator(h) * M)
    return normal_form(M)


def chebyshev_fraction(L: OrePoly, var: str = "n") -> OreFraction:
    """L(X, D) with X = (Sn + Sn^-1)/2 and D = (1 - X^2)^-1 (Sn - Sn^-1)/2 * n.

    These images reproduce 2x T_n = T_(n+1) + T_(n-1) and
    2(1 - x^2) T_n' = n T_(n-1) - n T_(n+1) on coefficient sequences.
    """
    R = rec_ring_for(L, var)
    F = R.coeff_field
    half = F(R.base.one / 2)
    S, Si = R.generator(1), R.generator(-1)
    X = (S + Si).lmul_scalar(half)
    # the multiplication by n acts on the sequence before the shifts
    N = (S - Si) * R.scalar(F.gen() * half)
    Dfrac = OreFraction(R.one() - X * X, N)
    polys = normal_form(L).poly_coeffs()
    total = OreFraction(R.one(), R.zero())
    Dpow = OreFraction(R.one(), R.one())
    for i, p in enumerate(polys):
        if i:
            Dpow = frac_mul(Dpow, Dfrac)
        if not p:
            continue
        PX = R.zero()
        for c in reversed(p.c):
            PX = PX * X + R.scalar(c)
        total = frac_add(total, frac_mul(OreFraction.from_poly(PX), Dpow))
    return total


def chebyshev_morphism(L: OrePoly, var: str = "n") -> OrePoly:
    """Recurrence for the Chebyshev coefficients of solutions of L (reduced numerator)."""
    return normal_form(chebyshev_fraction(L, var).num)
