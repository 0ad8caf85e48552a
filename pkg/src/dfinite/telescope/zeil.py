"""Zeilberger's creative telescoping for hypergeometric terms and definite sums."""

from __future__ import annotations

from dataclasses import dataclass

import sympy
from gmpy2 import mpq

from ..exact import Poly, QQ, RatFunc
from ..exact.fields import ParamField
from ..holonomic import PRecSequence, rec_required_prefix
from ..ore import OrePoly, OreRing, normal_form
from .gosper import Coeffs, _kshift, gosper_form, solve_gosper
from .term import HyperTerm, shift


@dataclass(frozen=True)
class TelescopingResult:
    """sum_j c_j(n) t(n+j, k) = R(n, k+1) t(n, k+1) - R(n, k) t(n, k)."""

    telescoper: OrePoly
    certificate: object  # element of QQ(n, k, params)
    coefficients: tuple  # c_j as elements of QQ(n, k, params), matching the certificate

    def as_dict(self):
        from ..cli.printing import format_operator

        return {
            "telescoper": format_operator(self.telescoper),
            "certificate": sympy.sstr(sympy.factor(self.certificate.as_expr())).replace("**", "^"),
        }


def _shift_products(term: HyperTerm, rho: int):
    """t(n+j, k) / t(n, k) for j = 0..rho."""
    K = term.K
    out = [K.one]
    for j in range(1, rho + 1):
        out.append(out[-1] * shift(term.r, K, term.n, j - 1))
    return out


def verify_certificate(term: HyperTerm, res: TelescopingResult) -> bool:
    """Exact check of the telescoping relation divided by t(n, k)."""
    K = term.K
    ratios = _shift_products(term, len(res.coefficients) - 1)
    lhs = K.zero
    for c, q in zip(res.coefficients, ratios):
        lhs = lhs + c * q
    R = res.certificate
    rhs = shift(R, K, term.k, 1) * term.s - R
    return lhs == rhs


def _base_field(term: HyperTerm):
    return ParamField(term.params) if term.params else QQ


def _to_recop(coeffs, term: HyperTerm) -> OrePoly:
    """Telescoper sum c_j Sn^j with c_j in QQ(n, params) as an operator."""
    base = _base_field(term)
    ring = OreRing.shift(term.n, base, "S" + term.n)
    F = ring.coeff_field
    ng = sympy.Symbol(term.n)
    out = []
    for c in coeffs:
        ex = sympy.cancel(c.as_expr())
        num, den = sympy.fraction(ex)
        out.append(RatFunc(_expr_poly(num, ng, base), _expr_poly(den, ng, base)))
    return normal_form(OrePoly(ring, out))


def _expr_poly(ex, var, base) -> Poly:
    p = sympy.Poly(ex, var)
    cs = [base(sympy.sstr(c)) if isinstance(base, ParamField) else base(mpq(str(c)))
          for c in reversed(p.all_coeffs())]
    return Poly(cs, base)


def zeilberger(term: HyperTerm, max_order: int = 6, min_order: int = 0) -> TelescopingResult:
    """Telescoper of minimal order <= max_order with its certificate (verified)."""
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    K = term.K
    C = Coeffs(K, term.k)
    for rho in range(min_order, max_order + 1):
        ratios = _shift_products(term, rho)
        den = C.R.one
        for q in ratios:
            den = den.lcm(q.denom)
        P = [q.numer * den.exquo(q.denom) for q in ratios]
        # hypergeometric part t(n,k)/den(k)
        quot = term.s * K(den) / shift(K(den), K, term.k, 1)
        a, b, c0 = gosper_form(quot.numer, quot.denom, C)
        b1 = _kshift(b, C, -1)
        cs = [p * c0 for p in P]
        sol = solve_gosper(a, b1, cs, C)
        if sol is None:
            continue
        x, lam = sol
        lamK = [C.to_K(l) for l in lam]
        X = C.poly_from(x)
        R = K(b1) * X / (K(c0) * K(den)) if any(x) else K.zero
        # rescale to the normalized telescoper
        rec = _to_recop(lamK, term)
        lead = lamK[-1] if lamK[-1] else next(l for l in reversed(lamK) if l)
        target = _ratfunc_to_K(rec.coeffs[-1], term) if rec.order == len(lamK) - 1 else None
        if target is not None:
            scale = target / lead
            lamK = [l * scale for l in lamK]
            R = R * scale
        res = TelescopingResult(rec, R, tuple(lamK))
        if not verify_certificate(term, res):
            raise AssertionError("telescoping certificate failed verification")
        return res
    raise ArithmeticError(f"no telescoper of order <= {max_order}")


def _ratfunc_to_K(c: RatFunc, term: HyperTerm):
    from ..cli.printing import ratfunc_to_sympy

    K = term.K
    ex = ratfunc_to_sympy(c, term.n)
    return K.from_expr(ex)


# ---------------------------------------------------------------- definite sums


def _support_upper(term: HyperTerm, nmax: int = 20):
    """(mult, offset) with t(n, k) = 0 for k < 0 and k > mult*n + offset on the window."""
    for mult in (1, 2, 3, 4):
        ok = True
        for n0 in range(0, nmax + 1):
            hi = mult * n0
            for k0 in (-3, -2, -1, hi + 1, hi + 2, hi + 3):
                if term.value(n0, k0) != 0:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return mult
    raise ValueError("term does not have natural boundaries on the checked window")


def brute_sum(term: HyperTerm, n0: int, mult: int | None = None):
    mult = mult or _support_upper(term)
    total = sympy.Integer(0)
    for k0 in range(0, mult * n0 + 1):
        total += term.value(n0, k0)
    return total


def definite_sum(term: HyperTerm, max_order: int = 6, check_upto: int = 20) -> PRecSequence:
    """The sequence sum_k t(n, k) over the natural support, as a P-recursive sequence."""
    mult = _support_upper(term, check_upto)
    res = zeilberger(term, max_order, min_order=1)
    rec = res.telescoper
    base = rec.ring.base
    nterms = max(check_upto + rec.order + 1, rec_required_prefix(rec))
    vals = [brute_sum(term, n0, mult) for n0 in range(nterms)]
    vals = [base(mpq(str(v))) if not isinstance(base, ParamField) else base(sympy.sstr(v))
            for v in vals]
    # homogeneous boundary: the telescoper must annihilate the actual sums
    for n0 in range(0, nterms - rec.order):
        acc = base.zero
        for j, c in rec.terms():
            acc = acc + c(n0) * vals[n0 + j]
        if acc:
            raise ValueError("inhomogeneous boundary, unsupported")
    need = rec_required_prefix(rec)
    return PRecSequence(rec, tuple(vals[:max(need, 1)]))
