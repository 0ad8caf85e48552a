"""Certified evaluation of D-finite power series and numerical analytic continuation.

A step from an expansion point a to a + h sums the Taylor series of the solution
by binary splitting of the local recurrence and adds a rigorous bound for the
remainder.  The bound comes from a geometric majorant: past an index M0 the
recurrence coefficients satisfy |q_k(m)/q_0(m)| <= beta_k, and if
sum beta_k s^k <= 1 then |u_m| <= C s^-m with C read off a window of exact terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq, mpz

from ..exact import GaussRat, Poly, QQI, poly_shift
from ..holonomic import (
    DFiniteFunction,
    _local_rec,
    _rec_data,
    extend_series,
    required_prefix,
    translate_diffop,
)
from ..local import singular_distance_lower_bound
from ..ore import normal_form
from .enclosure import Enclosure, abs_up, pow_up, round_gauss, round_up
from .tree import GInt, product_range, to_exact


class StepTooLarge(ArithmeticError):
    """The requested step exceeds the radius certified by the majorant."""

    def __init__(self, certified):
        super().__init__(f"step exceeds certified radius {float(certified) if certified else 0:.6g}")
        self.certified = certified


class PathError(ValueError):
    pass


def _gauss(z) -> GaussRat:
    if isinstance(z, str):
        from ..cli.parse import parse_scalar

        return GaussRat.coerce(parse_scalar(z, QQI))
    return GaussRat.coerce(z)


def _pt(z):
    """Canonical point: mpq when real, GaussRat otherwise."""
    z = _gauss(z)
    return z.re if not z.im else z


# ---------------------------------------------------------------- local recurrence


@dataclass
class LocalRec:
    """u_m = -(q_1(m) u_(m-1) + ... + q_K(m) u_(m-K)) / q_0(m), valid for m >= prefix."""

    K: int
    q: list  # Poly in m, q[0] leading
    prefix: int
    R: object  # the Laurent recurrence itself
    field: object

    @classmethod
    def at(cls, L, a) -> "LocalRec":
        R = _local_rec(L, a)
        low, high, polys = _rec_data(R)
        F = R.ring.base
        K = high - low
        q = []
        for k in range(K + 1):
            p = polys.get(high - k)
            q.append(p.shift(F(-high)) if p is not None and p else Poly.zero(F))
        return cls(K, q, required_prefix(L, a), R, F)

    def series(self, prefix, N):
        return extend_series(self.R, prefix, N, self.field)


def _re_part(p: Poly) -> list:
    return [c.re if isinstance(c, GaussRat) else mpq(c) for c in p.c]


def _majorant(rec: LocalRec, M0: int):
    """(beta list, ok) for indices m >= M0, or None when the test fails at M0."""
    F = rec.field
    q0 = rec.q[0]
    lam = F.one / q0.lc
    q0s = poly_shift(q0.scale(lam), F(M0))
    d = _re_part(q0s)
    if any(x <= 0 for x in d):
        return None
    betas = []
    for k in range(1, rec.K + 1):
        qk = rec.q[k]
        if not qk:
            betas.append(mpq(0))
            continue
        if qk.deg > q0.deg:
            return None
        cs = poly_shift(qk.scale(lam), F(M0)).c
        betas.append(max(round_up(abs_up(c) / d[j]) for j, c in enumerate(cs)))
    return betas


def _certified_radius(betas) -> mpq | None:
    """Largest dyadic s (within 2^-30 relative) with sum beta_k s^k <= 1; None if unbounded."""
    if not any(betas):
        return None

    def phi(s):
        return sum(b * s ** (k + 1) for k, b in enumerate(betas) if b)

    lo, hi = mpq(0), mpq(1)
    while phi(hi) <= 1:
        lo, hi = hi, hi * 2
        if hi > mpq(2) ** 200:
            return None
    while phi(lo) > 1 or lo == 0:
        if phi(hi / 2) <= 1:
            lo = hi / 2
            break
        hi = hi / 2
    for _ in range(34):
        mid = (lo + hi) / 2
        if phi(mid) <= 1:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass
class StepPlan:
    M0: int
    s: mpq  # majorant radius
    q: mpq  # |h| / s rounded up


def _first_positive(rec: LocalRec) -> int:
    M0 = max(rec.prefix, 1)
    while _majorant(rec, M0) is None:
        M0 *= 2
        if M0 > 1 << 24:
            raise ArithmeticError("recurrence coefficients not eventually dominated")
    return M0


def plan_step(rec: LocalRec, habs: mpq, digits: int) -> StepPlan:
    """Choose the start index of the majorant and the radius s > |h|."""
    M0 = _first_positive(rec)
    best = None
    best_cost = None
    limit = 1 << 16
    while M0 <= limit:
        betas = _majorant(rec, M0)
        if betas is not None:
            s = _certified_radius(betas)
            if s is None:
                s = max(mpq(64) * habs, mpq(M0))
            if habs == 0 or s > habs:
                q = round_up(habs / s) if habs else mpq(0)
                if q < 1:
                    lq = -math.log(float(q)) if q else 50.0
                    nest = digits * math.log(10) / max(lq, 1e-12)
                    cost = max(M0 + rec.K, nest)
                    if q <= mpq(15, 16) and (best_cost is None or cost < best_cost):
                        best, best_cost = StepPlan(M0, s, q), cost
        if best_cost is not None and M0 > best_cost:
            break
        M0 *= 2
    if best is None:
        betas = _majorant(rec, min(M0, limit))
        raise StepTooLarge(_certified_radius(betas) if betas else None)
    return best


# ---------------------------------------------------------------- binary splitting


def _int_poly(p: Poly, scale):
    """Coefficients of scale * p as mpz/GInt (scale clears all denominators)."""
    out = []
    for c in p.c:
        c = GaussRat.coerce(c) * scale
        if c.re.denominator != 1 or c.im.denominator != 1:
            raise ValueError("scale does not clear denominators")
        out.append(GInt(c.re.numerator, c.im.numerator) if c.im else mpz(c.re.numerator))
    return out


def _denominator_lcm(polys) -> int:
    den = 1
    for p in polys:
        for c in p.c:
            c = GaussRat.coerce(c)
            den = math.lcm(den, int(c.re.denominator), int(c.im.denominator))
    return den


def _ev(c, m):
    acc = 0
    for a in reversed(c):
        acc = acc * m + a
    return acc


class JetLeaf:
    """Transition state_m -> state_(m+1) for the partial sums and derivative sums."""

    def __init__(self, K, J, rows, q0, gK, complex_):
        self.K, self.J = K, J
        self.rows = rows  # rows[k-1]: coefficients of -q_k(m) H^k g^(K-k)
        self.q0 = q0
        self.gK = gK
        self.complex_ = complex_

    def __call__(self, m):
        m = mpz(m)
        K, J = self.K, self.J
        q0 = _ev(self.q0, m)
        c = [_ev(r, m) for r in self.rows]
        if isinstance(q0, GInt):
            conj = q0.conj()
            c = [x * conj for x in c]
            D = q0.norm() * self.gK
        else:
            D = q0 * self.gK
        dim = K + J
        A = [[0] * dim for _ in range(dim)]
        for k in range(K):
            A[0][k] = c[k]
        for j in range(1, K):
            A[j][j - 1] = D
        b = mpz(1)
        for i in range(J):
            if i:
                b = b * (m - i + 1) // i
            row = A[K + i]
            if b:
                for k in range(K):
                    row[k] = b * c[k]
            row[K + i] = D
        return A, D


def _binomial_tail(C: mpq, s: mpq, q: mpq, N: int, i: int) -> mpq | None:
    """Upper bound of C s^-i sum_{m>=N} binom(m,i) q^(m-i); None if not yet convergent."""
    if C == 0:
        return mpq(0)
    rho = round_up(q * (N + 1) / (N + 1 - i)) if N + 1 > i else None
    if rho is None or rho >= 1:
        return None
    t = round_up(mpq(math.comb(N, i)) * pow_up(q, N - i))
    si = pow_up(1 / s, i) if i else mpq(1)
    return round_up(C * si * t / (1 - rho))


def _tail_bound(C, plan: StepPlan, N: int, J: int):
    worst = mpq(0)
    for i in range(J):
        t = _binomial_tail(C, plan.s, plan.q, N, i)
        if t is None:
            return None
        worst = max(worst, t)
    return worst


@dataclass
class StepResult:
    """Jets of each basis prefix at a + h: exact truncated sums plus a tail bound."""

    jets: list  # per prefix: list of J exact values
    tails: list  # per prefix: bound on |truncation error| of each jet entry
    terms: int


def series_step(rec: LocalRec, h: GaussRat, prefixes: Sequence[Sequence], J: int,
                eps: mpq, digits: int) -> StepResult:
    """Taylor coefficients 0..J-1 at a + h of the solutions with the given prefixes."""
    h = GaussRat.coerce(h)
    s0 = len(prefixes[0])
    if not h:
        jets = [[GaussRat.coerce(p[i]) if i < len(p) else GaussRat(0)
                 for i in range(J)] for p in prefixes]
        # coefficients beyond the prefix come from the recurrence
        if J > s0:
            jets = [[GaussRat.coerce(v) for v in rec.series(list(p), J)] for p in prefixes]
        return StepResult(jets, [mpq(0)] * len(prefixes), 0)
    habs = abs_up(h)
    plan = plan_step(rec, habs, digits)
    K = rec.K
    # exact window for the majorant constant
    hi_idx = plan.M0 + K
    Cs = []
    for p in prefixes:
        u = rec.series(list(p), hi_idx)
        C = mpq(0)
        for m in range(plan.M0, hi_idx):
            if u[m]:
                C = max(C, round_up(abs_up(u[m]) * pow_up(plan.s, m)))
        Cs.append(C)
    Cmax = max(Cs)
    # number of terms
    lq = -math.log(float(plan.q)) if plan.q else 50.0
    lC = math.log(float(Cmax) + 1e-300) if Cmax else 0.0
    N = max(hi_idx, s0, int((digits * math.log(10) + lC) / lq) + J + 2)
    while True:
        tb = _tail_bound(Cmax, plan, N, J)
        if tb is not None and tb <= eps:
            break
        N = int(N * 1.1) + 2
    # integer transition matrices
    g = _denominator_lcm([Poly([h], QQI)])
    H = h * g
    Hg = GInt(H.re.numerator, H.im.numerator) if H.im else mpz(H.re.numerator)
    qden = _denominator_lcm(rec.q)
    gK = mpz(g) ** K
    rows = []
    Hk = mpz(1)
    for k in range(1, K + 1):
        Hk = Hk * Hg
        c = _int_poly(rec.q[k], mpq(qden))
        factor = -Hk * (mpz(g) ** (K - k))
        rows.append([factor * x for x in c])
    q0 = _int_poly(rec.q[0], mpq(qden))
    complex_ = bool(H.im) or any(isinstance(x, GInt) for r in rows for x in r) or any(
        isinstance(x, GInt) for x in q0)
    leaf = JetLeaf(K, J, rows, q0, gK, complex_)
    P, d = product_range(leaf, s0 - 1, N - 1, K + J)
    jets = []
    hpow_inv = [GaussRat(1)]
    for i in range(1, J):
        hpow_inv.append(hpow_inv[-1] / h)
    for p in prefixes:
        t = [GaussRat.coerce(p[l]) * h ** l for l in range(s0)]
        state = [t[s0 - 1 - k] if s0 - 1 - k >= 0 else GaussRat(0) for k in range(K)]
        for i in range(J):
            state.append(sum((t[l] * math.comb(l, i) for l in range(s0) if l >= i), GaussRat(0)))
        out = []
        for i in range(J):
            row = P[K + i]
            acc = GaussRat(0)
            for j, v in enumerate(state):
                if v and row[j]:
                    acc = acc + v * to_exact(row[j])
            out.append(acc / d * hpow_inv[i])
        jets.append(out)
    tails = [_tail_bound(C, plan, N, J) for C in Cs]
    return StepResult(jets, tails, N)


# ---------------------------------------------------------------- paths


@dataclass
class EvalRequest:
    f: DFiniteFunction
    point: object
    precision: int
    path: list | None = None


@dataclass
class _State:
    point: object
    exact: list | None  # exact prefix (possibly longer than the order)
    centers: list | None  # dyadic Taylor coefficients
    radii: list | None


def _start_state(f: DFiniteFunction) -> _State:
    if f.radius is None:
        return _State(f.point, list(f.initial), None, None)
    r = f.order
    return _State(f.point, None, [GaussRat.coerce(v) for v in f.initial[:r]],
                  [mpq(f.radius)] * r)


def _leading_vanishes(L, b) -> bool:
    La = translate_diffop(L, b)
    p = normal_form(La).poly_coeffs()[-1]
    return not p.evaluate(p.field.zero)


def _advance(L, st: _State, b, J: int, eps: mpq, digits: int, bits: int) -> _State:
    a = st.point
    h = _gauss(b) - _gauss(a)
    rec = LocalRec.at(L, a)
    if st.exact is not None:
        res = series_step(rec, h, [st.exact], J, eps, digits)
        centers, radii = [], []
        for v in res.jets[0]:
            c, err = round_gauss(v, bits)
            centers.append(c)
            radii.append(round_up(err + res.tails[0]))
        return _State(_pt(b), None, centers, radii)
    r = len(st.centers)
    basis = [[GaussRat(1) if j == i else GaussRat(0) for j in range(r)] for i in range(r)]
    res = series_step(rec, h, basis, J, eps, digits)
    centers, radii = [], []
    mags = [round_up(abs_up(c) + rd) for c, rd in zip(st.centers, st.radii)]
    for j in range(J):
        acc = GaussRat(0)
        err = mpq(0)
        for i in range(r):
            w = res.jets[i][j]
            if st.centers[i]:
                acc = acc + st.centers[i] * w
            if st.radii[i]:
                err += st.radii[i] * abs_up(w)
            err += mags[i] * res.tails[i]
        c, rerr = round_gauss(acc, bits)
        centers.append(c)
        radii.append(round_up(err + rerr))
    return _State(_pt(b), None, centers, radii)


def _distance_bound(L, a) -> mpq | None:
    return singular_distance_lower_bound(L, a)


def _toward(c, b, length: mpq) -> GaussRat:
    """A dyadic point on the segment from c to b at distance about ``length`` from c."""
    c, b = _gauss(c), _gauss(b)
    h = b - c
    t = length / abs_up(h)
    bits = 4
    while mpq(1, 1 << bits) > length / 64:
        bits += 1
    m, _ = round_gauss(c + h * t, bits)
    return m


def _walk(f: DFiniteFunction, waypoints: list, final_J: int, digits: int, guard: int,
          user_path: bool) -> _State:
    L = f.ann
    st = _start_state(f)
    eps = mpq(1, 10 ** (digits + guard))
    bits = int((digits + guard) * 3.33) + 16
    for idx, b in enumerate(waypoints):
        last = idx == len(waypoints) - 1
        if _gauss(b) == _gauss(st.point):
            continue
        if _leading_vanishes(L, b):
            raise PathError(f"waypoint {b} is a singular point of the equation")
        rho = _distance_bound(L, st.point)
        if rho is not None and abs_up(_gauss(b) - _gauss(st.point)) >= rho:
            if user_path:
                raise PathError("waypoint outside previous disk of convergence")
            raise PathError("point outside the disk of convergence: supply continuation path")
        steps = 0
        while _gauss(b) != _gauss(st.point):
            J = final_J if last else L.order
            try:
                st = _advance(L, st, b, J, eps, digits + guard, bits)
                continue
            except StepTooLarge as exc:
                cert = exc.certified
            steps += 1
            if steps > 400:
                raise PathError("could not subdivide the path")
            local = _distance_bound(L, st.point)
            cands = [abs_up(_gauss(b) - _gauss(st.point)) / 2]
            if local is not None:
                cands.append(local / 2)
            if cert:
                cands.append(cert * 3 / 4)
            mid = _toward(st.point, b, min(cands))
            st = _advance(L, st, _pt(mid), L.order, eps, digits + guard, bits)
    return st


def eval_dfinite(req, point=None, prec: int = 30, path=None) -> Enclosure:
    """Certified value of f at ``point`` with radius at most 10^-prec.

    Accepts an :class:`EvalRequest` or ``(f, point, prec, path)``.
    """
    if isinstance(req, EvalRequest):
        f, point, prec, path = req.f, req.point, req.precision, req.path
    else:
        f = req
    if f.ann.ring.params:
        raise ValueError("numerical evaluation needs numeric coefficients")
    z = _pt(point)
    if _gauss(z) == _gauss(f.point):
        if f.radius is None:
            return Enclosure.exact(f.initial[0])
        return Enclosure(GaussRat.coerce(f.initial[0]), mpq(f.radius))
    waypoints = [_pt(w) for w in (path or [])] + [z]
    target = mpq(1, 10 ** prec)
    guard = 8
    for _ in range(6):
        st = _walk(f, waypoints, 1, prec, guard, bool(path))
        enc = Enclosure(st.centers[0], st.radii[0])
        if enc.radius <= target:
            return enc
        guard *= 2
    raise ArithmeticError("could not reach the requested precision")


def continue_analytic(f: DFiniteFunction, path, prec: int = 30) -> DFiniteFunction:
    """f re-expanded at the last waypoint, with interval Taylor coefficients."""
    waypoints = [_pt(w) for w in path]
    if not waypoints or all(_gauss(w) == _gauss(f.point) for w in waypoints):
        return f
    if f.ann.ring.params:
        raise ValueError("numerical continuation needs numeric coefficients")
    target = mpq(1, 10 ** prec)
    guard = 8
    for _ in range(6):
        st = _walk(f, waypoints, f.order, prec, guard, True)
        rad = max(st.radii)
        if rad <= target:
            return DFiniteFunction(f.ann, tuple(st.centers), st.point, radius=rad, check=False)
        guard *= 2
    raise ArithmeticError("could not reach the requested precision")


def taylor_enclosures(f: DFiniteFunction) -> list[Enclosure]:
    r = mpq(f.radius or 0)
    return [Enclosure(GaussRat.coerce(v), r) for v in f.initial]


SMALL_DYADIC_BITS = 64


def _small_dyadic(t: GaussRat) -> bool:
    for q in (t.re, t.im):
        d = int(q.denominator)
        if d & (d - 1) or d.bit_length() > SMALL_DYADIC_BITS + 1 \
                or int(abs(q.numerator)).bit_length() > SMALL_DYADIC_BITS:
            return False
    return True


def bit_burst_path(target, prec: int) -> list:
    """Dyadic waypoints floor(2^(2^i) t) 2^-(2^i) approaching the target.

    ``target`` is an :class:`Enclosure` (or exact number); the last waypoint lies
    within 10^-prec of its center.  A target that is already a dyadic number of
    small bit size is returned as the only waypoint.
    """
    if isinstance(target, Enclosure):
        if target.width() > mpq(1, 10 ** prec):
            raise ValueError("enclosure too wide for the requested precision")
        t = target.center
    else:
        t = _gauss(target)
    if _small_dyadic(t):
        return [_pt(t)]
    tol = mpq(1, 10 ** prec)
    out = []
    i = 0
    while True:
        e = 1 << i
        scale = mpz(1) << e
        w = GaussRat(mpq((t.re * scale).numerator // (t.re * scale).denominator, scale),
                     mpq((t.im * scale).numerator // (t.im * scale).denominator, scale))
        wp = _pt(w)
        if not out or out[-1] != wp:
            out.append(wp)
        if w == t or mpq(2, scale) <= tol:
            break
        i += 1
    return out
