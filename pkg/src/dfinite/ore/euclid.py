"""Euclidean algorithms in Ore rings: division, gcrd, lclm and their left analogues."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .ring import OrePoly, clear_laurent, normal_form

# When True, every xgcrd call re-verifies its Bezout relations by multiplication
# (set DFIN_CHECK=1; the test suite turns it on).
CHECK_POSTCONDITIONS = os.environ.get("DFIN_CHECK") == "1"


def _require_poly(*ops: OrePoly):
    for P in ops:
        if P.low < 0:
            raise ValueError("Laurent operator: clear negative powers first")


def ore_rdivmod(A: OrePoly, B: OrePoly):
    """Right division A = Q*B + R with deg R < deg B."""
    A._check(B)
    if not B:
        raise ZeroDivisionError("division by zero operator")
    _require_poly(A, B)
    R = A.ring
    F = R.coeff_field
    db = B.order
    if A.order < db:
        return R.zero(), A
    qcoeffs = [F.zero] * (A.order - db + 1)
    powers = [B]  # powers[k] = D^k * B
    rem = A
    lcB = B.lc
    while rem and rem.order >= db:
        k = rem.order - db
        while len(powers) <= k:
            powers.append(powers[-1].gen_times(1))
        q = rem.lc / R.sigma(lcB, k)
        qcoeffs[k] = qcoeffs[k] + q
        rem = rem - powers[k].lmul_scalar(q)
    return OrePoly(R, qcoeffs), rem


def ore_ldivmod(A: OrePoly, B: OrePoly):
    """Left division A = B*Q + R with deg R < deg B."""
    A._check(B)
    if not B:
        raise ZeroDivisionError("division by zero operator")
    _require_poly(A, B)
    R = A.ring
    F = R.coeff_field
    db = B.order
    if A.order < db:
        return R.zero(), A
    qcoeffs = [F.zero] * (A.order - db + 1)
    rem = A
    lcB = B.lc
    while rem and rem.order >= db:
        k = rem.order - db
        q = R.sigma(rem.lc / lcB, -db)
        qcoeffs[k] = qcoeffs[k] + q
        term = OrePoly(R, [q], k)
        rem = rem - B * term
    return OrePoly(R, qcoeffs), rem


def _scale_triple(lam, *ops):
    return tuple(P.lmul_scalar(lam) for P in ops)


@dataclass(frozen=True)
class XGCRD:
    G: OrePoly
    u: OrePoly
    v: OrePoly
    U: OrePoly
    V: OrePoly

    def __iter__(self):
        return iter((self.G, self.u, self.v, self.U, self.V))


def ore_xgcrd(A: OrePoly, B: OrePoly) -> XGCRD:
    """Extended right Euclid: u*A + v*B = G = gcrd(A, B) and U*A + V*B = 0.

    Every remainder is replaced by its primitive left associate to limit the
    growth of coefficients.
    """
    A._check(B)
    if not A or not B:
        raise ValueError("xgcrd needs nonzero operators")
    _require_poly(A, B)
    R = A.ring
    F = R.coeff_field
    r0, r1 = A, B
    u0, u1 = R.one(), R.zero()
    v0, v1 = R.zero(), R.one()
    lam = F.primitive_scale(list(reversed(r1.coeffs)))
    r1, u1, v1 = _scale_triple(lam, r1, u1, v1)
    lam = F.primitive_scale(list(reversed(r0.coeffs)))
    r0, u0, v0 = _scale_triple(lam, r0, u0, v0)
    while r1:
        q, r = ore_rdivmod(r0, r1)
        r2 = r
        u2 = u0 - q * u1
        v2 = v0 - q * v1
        if r2:
            lam = F.primitive_scale(list(reversed(r2.coeffs)))
            r2, u2, v2 = _scale_triple(lam, r2, u2, v2)
        else:
            lam = F.primitive_scale(list(reversed(u2.coeffs)) + list(reversed(v2.coeffs)))
            u2, v2 = _scale_triple(lam, u2, v2)
        r0, r1 = r1, r2
        u0, u1 = u1, u2
        v0, v1 = v1, v2
    res = XGCRD(r0, u0, v0, u1, v1)
    if CHECK_POSTCONDITIONS:
        assert u0 * A + v0 * B == r0
        assert u1 * A + v1 * B == R.zero()
    return res


def ore_gcrd(A: OrePoly, B: OrePoly) -> OrePoly:
    """Greatest common right divisor in normal form."""
    if not A:
        return normal_form(B)
    if not B:
        return normal_form(A)
    return normal_form(ore_xgcrd(A, B).G)


def ore_lclm(A: OrePoly, B: OrePoly, poly_content: bool = True) -> OrePoly:
    """Least common left multiple in normal form."""
    A, B = clear_laurent(A), clear_laurent(B)
    if not A or not B:
        return A.ring.zero()
    res = ore_xgcrd(A, B)
    return normal_form(res.U * A, poly_content=poly_content)


def lclm_cofactors(A: OrePoly, B: OrePoly):
    """(L, u, v) with u*A = v*B = L = lclm(A, B), not normalized."""
    res = ore_xgcrd(A, B)
    return res.U * A, res.U, -res.V


def ore_gcld(A: OrePoly, B: OrePoly) -> OrePoly:
    """Greatest common left divisor (no normalization beyond monic leading coefficient)."""
    _require_poly(A, B)
    r0, r1 = A, B
    while r1:
        _, r = ore_ldivmod(r0, r1)
        r0, r1 = r1, r
    return r0


def right_divides(B: OrePoly, A: OrePoly) -> bool:
    """True when A = Q*B for some Q."""
    return not ore_rdivmod(A, B)[1]
