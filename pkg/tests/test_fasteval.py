import itertools
import time
from math import factorial

import mpmath
import pytest
from gmpy2 import mpq, mpz
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DIFF, SHIFT
from dfinite.cli.parse import parse_operator
from dfinite.convert import rec_to_diffop
from dfinite.exact import GaussRat, Poly, QQ
from dfinite.fasteval import (Enclosure, MatFactorial, PathError, as_rational_matrix,
                              bit_burst_path, chudnovsky_pi, chudnovsky_terms, continue_analytic,
                              eval_dfinite, nth_term, pi_digits, product_tree)
from dfinite.holonomic import (DFiniteFunction, PRecSequence, SingularIndexError,
                               required_prefix, unroll)
from dfinite.ore import OrePoly


def D(text):
    return parse_operator(text, DIFF)


def S(text):
    return parse_operator(text, SHIFT)


def assert_contains(enc: Enclosure, value: str, dps: int):
    with mpmath.workdps(dps + 30):
        assert enc.contains_mp(mpmath.mpf(value))


EXP = DFiniteFunction(D("Dx - 1"), (1,))
ATAN = DFiniteFunction(D("(1+x^2)*Dx^2 + 2*x*Dx"), (0, 1))


# product trees -----------------------------------------------------------------

def test_factorial_leaf():
    M = MatFactorial([[Poly([0, 1], QQ)]], 0, 10)
    P, d = product_tree(M)
    assert as_rational_matrix(P, d) == [[3628800]]


def test_empty_range_is_identity():
    M = MatFactorial([[Poly([1], QQ), Poly([], QQ)], [Poly([3], QQ), Poly([0, 1], QQ)]], 0, 0)
    P, d = product_tree(M)
    assert as_rational_matrix(P, d) == [[1, 0], [0, 1]]


def test_exponential_partial_sums_matrix():
    # [e_n; e_(n-1)] = A(n)...A(1) [1; 0] / n! with A(n) = [[n+1, -1], [n, 0]]
    A = [[Poly([1, 1], QQ), Poly([-1], QQ)], [Poly([0, 1], QQ), Poly([], QQ)]]
    for n in (1, 5, 30):
        P, d = product_tree(MatFactorial(A, 0, n))
        M = as_rational_matrix(P, d)
        e = [sum(mpq(1, factorial(k)) for k in range(m + 1)) for m in (n, n - 1)]
        assert [M[0][0] / factorial(n), M[1][0] / factorial(n)] == e


small_polys = st.lists(st.integers(-9, 9), min_size=0, max_size=3).map(
    lambda c: Poly([mpq(v) for v in c], QQ))


@settings(max_examples=40)
@given(st.integers(1, 3), st.data(), st.integers(0, 5000), st.integers(0, 40))
def test_product_tree_equals_naive(dim, data, hi, lo):
    # the naive rational product is slow for matrices, so cap their ranges
    if dim > 1:
        hi = min(hi, 600)
    lo = min(lo, hi)
    A = [[data.draw(small_polys) for _ in range(dim)] for _ in range(dim)]
    den = data.draw(st.sampled_from([None, Poly([mpq(1), mpq(1)], QQ)]))
    M = MatFactorial(A, lo, hi, den)
    P, d = product_tree(M, workers=1)
    assert as_rational_matrix(P, d) == M.naive()


def test_product_tree_long_range():
    A = [[Poly([1, 2], QQ), Poly([-1], QQ)], [Poly([0, 1], QQ), Poly([3], QQ)]]
    M = MatFactorial(A, 0, 5000)
    P, d = product_tree(M, workers=1)
    assert as_rational_matrix(P, d) == M.naive()


def test_parallel_tree_matches_serial():
    A = [[Poly([1, 1], QQ), Poly([-1], QQ)], [Poly([0, 1], QQ), Poly([], QQ)]]
    M = MatFactorial(A, 0, 3000)
    assert product_tree(M, workers=1) == product_tree(M, workers=3)


# nth term ----------------------------------------------------------------------

@st.composite
def recurrences(draw):
    r = draw(st.integers(1, 4))
    deg = draw(st.integers(0, 3))
    coeffs = [Poly([mpq(draw(st.integers(-5, 5))) for _ in range(deg + 1)], QQ)
              for _ in range(r)]
    # leading coefficient without nonnegative integer roots
    lead = Poly([mpq(draw(st.integers(1, 4)))] + [mpq(1)] * deg, QQ)
    from dfinite.exact import RatFunc

    R = OrePoly(SHIFT, [RatFunc.from_poly(c) for c in coeffs + [lead]])
    init = [draw(st.integers(-5, 5)) for _ in range(r)]
    return PRecSequence(R, init)


@settings(max_examples=40)
@given(recurrences(), st.integers(0, 2000))
def test_nth_term_matches_unroll(seq, N):
    assert nth_term(seq, N) == unroll(seq, N)[N]


def test_nth_term_below_prefix():
    seq = PRecSequence(S("Sn^2 - Sn - 1"), (0, 1))
    assert nth_term(seq, 1) == 1


def fib_pair(n):
    if n == 0:
        return 0, 1
    a, b = fib_pair(n // 2)
    c = a * (2 * b - a)
    d = a * a + b * b
    return (d, c + d) if n % 2 else (c, d)


def test_fibonacci_1000():
    v = nth_term(PRecSequence(S("Sn^2 - Sn - 1"), (0, 1)), 1000)
    assert v == fib_pair(1000)[0]
    assert len(str(v)) == 209


def test_exponential_partial_sum_50():
    e = PRecSequence(S("(n+2)*Sn^2 - (n+3)*Sn + 1"), (1, 2))
    v = nth_term(e, 50)
    assert v == unroll(e, 50)[50]
    assert factorial(50) % v.denominator == 0


def test_nth_term_singular_index():
    seq = PRecSequence(S("(n-3)*Sn - (n-2)"), (1, mpq(2, 3), mpq(1, 3), 0, 7))
    assert nth_term(seq, 40) == 7 * 37
    # a prefix too short to pass index 4 cannot be built normally; force one
    short = PRecSequence(S("(n-3)*Sn - (n-2)"), (1, mpq(2, 3), mpq(1, 3), 0, 7))
    object.__setattr__(short, "initial", short.initial[:1])
    with pytest.raises(SingularIndexError) as exc:
        nth_term(short, 10)
    assert exc.value.index == 4


def test_unreduced_pair():
    e = PRecSequence(S("(n+2)*Sn^2 - (n+3)*Sn + 1"), (1, 2))
    num, den = nth_term(e, 20, reduced=False)
    assert mpq(num, den) == nth_term(e, 20)


def test_scaling_is_reported():
    """Soft check: doubling N roughly doubles the time (informational only)."""
    e = PRecSequence(S("(n+2)*Sn^2 - (n+3)*Sn + 1"), (1, 2))
    times = []
    for N in (10_000, 20_000, 40_000):
        t = time.perf_counter()
        nth_term(e, N)
        times.append(time.perf_counter() - t)
    ratios = [b / a for a, b in zip(times, times[1:]) if a > 0]
    print(f"nth_term e_n timings {times}, doubling ratios {ratios}")
    assert all(r > 0 for r in ratios)


# certified evaluation ----------------------------------------------------------

def test_e_to_1000_digits(oracles):
    enc = eval_dfinite(EXP, 1, 1000)
    assert enc.radius <= mpq(1, mpz(10) ** 1000)
    assert_contains(enc, oracles["e"], 1050)


def test_arctan_half_to_100_digits(oracles):
    enc = eval_dfinite(ATAN, mpq(1, 2), 100)
    assert enc.radius <= mpq(1, mpz(10) ** 100)
    assert_contains(enc, oracles["atan_1_2"], 150)


def test_value_at_expansion_point():
    assert eval_dfinite(ATAN, 0, 50) == Enclosure.exact(0)
    assert eval_dfinite(EXP, 0, 50).center == 1


@pytest.mark.parametrize("f,x,key", [(EXP, 1, "e"), (ATAN, mpq(1, 2), "atan_1_2")])
def test_enclosures_shrink(oracles, f, x, key):
    prev = None
    for p in (10, 100, 1000 if key == "e" else 140):
        enc = eval_dfinite(f, x, p)
        assert_contains(enc, oracles[key], 1050)
        if prev is not None:
            assert enc.radius <= prev.radius
        prev = enc


def test_outside_disk_needs_path():
    with pytest.raises(PathError, match="supply continuation path"):
        eval_dfinite(ATAN, 2, 20)


def test_waypoint_at_singularity():
    with pytest.raises(PathError):
        eval_dfinite(ATAN, 2, 20, path=[GaussRat(0, 1)])


# pi --------------------------------------------------------------------------

def test_pi_1000(oracles):
    enc = chudnovsky_pi(1000)
    assert enc.radius <= mpq(1, mpz(10) ** 1000)
    assert_contains(enc, oracles["pi"], 1050)


def test_pi_digits_strings(oracles):
    assert pi_digits(15) == "3.14159265358979"
    assert pi_digits(1) == "3"
    assert pi_digits(300) == oracles["pi"][:301]
    one = chudnovsky_pi(1)
    assert one.radius <= mpq(1, 10)
    with mpmath.workdps(50):
        assert one.contains_mp(mpmath.pi)


@pytest.mark.parametrize("p", [14, 100, 1000, 5000])
def test_chudnovsky_term_count(p):
    guard = 1
    assert abs(chudnovsky_terms(p) - (-(-p // 14) + guard)) <= 2
    assert chudnovsky_pi(p).radius <= mpq(1, mpz(10) ** p)


# analytic continuation ---------------------------------------------------------

FIG_PATH = [mpq(1, 2), mpq(1), mpq(3, 2), mpq(2), GaussRat(2, mpq(1, 2))]


def test_arctan_continued_to_2_plus_i(oracles):
    enc = eval_dfinite(ATAN, GaussRat(2, 1), 50, path=FIG_PATH)
    o = oracles["atan_2_plus_i"]
    with mpmath.workdps(100):
        assert enc.contains_mp(mpmath.mpc(o["re"], o["im"]))
    assert enc.radius <= mpq(1, mpz(10) ** 50)


def test_continuation_composes(oracles):
    g = continue_analytic(ATAN, [mpq(1, 2)], 60)
    h = continue_analytic(g, [mpq(9, 10)], 50)
    direct = continue_analytic(ATAN, [mpq(9, 10)], 50)
    for a, b in zip(h.initial, direct.initial):
        diff = GaussRat.coerce(a) - GaussRat.coerce(b)
        assert diff.norm() <= (h.radius + direct.radius) ** 2
    assert_contains(Enclosure(GaussRat.coerce(h.initial[0]), h.radius), oracles["atan_9_10"], 60)


def test_trivial_path_is_identity():
    assert continue_analytic(ATAN, [0], 30) is ATAN


def test_continuation_outside_disk():
    with pytest.raises(PathError):
        continue_analytic(ATAN, [mpq(3, 2)], 20)


def test_polya_partial_sums(oracles):
    R = S("36*(n+2)^3*Sn^2 - 2*(2*n+3)*(10*n^2+30*n+23)*Sn + (2*n+3)*(2*n+1)*(n+1)")
    u = PRecSequence(R, (1, mpq(1, 6)))
    # partial sums a_n = u_0 + ... + u_n satisfy R(n+1) (Sn - 1) a = 0
    R1 = OrePoly(R.ring, [c.shift(1) for c in R.coeffs], R.low)
    A = PRecSequence(R1 * (R.ring.generator(1) - R.ring.one()),
                     tuple(itertools.accumulate(u.terms(4))))
    assert A.terms(30) == list(itertools.accumulate(u.terms(30)))
    L = rec_to_diffop(A.ann, A.initial, var="x")
    f = DFiniteFunction(L, tuple(A.terms(required_prefix(L, 0))))
    enc = eval_dfinite(f, mpq(9, 10), 50)
    assert_contains(enc, oracles["polya_partial_sums_9_10"], 90)


# bit burst ---------------------------------------------------------------------

def floor_dyadic(t, i):
    s = mpz(1) << (1 << i)
    return mpq((t * s).numerator // (t * s).denominator, s)


def test_bit_burst_third():
    path = bit_burst_path(mpq(1, 3), 30)
    expected = []
    i = 0
    while True:
        w = floor_dyadic(mpq(1, 3), i)
        if not expected or expected[-1] != w:
            expected.append(w)
        if mpq(2, mpz(1) << (1 << i)) <= mpq(1, 10 ** 30):
            break
        i += 1
    assert path == expected
    assert abs(path[-1] - mpq(1, 3)) <= mpq(1, 10 ** 30)


def test_bit_burst_small_dyadic():
    assert bit_burst_path(mpq(3, 4), 30) == [mpq(3, 4)]


def test_bit_burst_pi_doubles_bits():
    enc = chudnovsky_pi(40)
    path = bit_burst_path(enc, 30)
    t = enc.center.re
    sizes = []
    for w in path:
        i = next(i for i in range(12) if floor_dyadic(t, i) == w)
        sizes.append(1 << i)
    assert path[0] == 3
    assert all(b >= 2 * a for a, b in zip(sizes, sizes[1:]))
    assert abs(path[-1] - t) <= mpq(1, 10 ** 30)


def test_bit_burst_too_wide():
    with pytest.raises(ValueError, match="too wide"):
        bit_burst_path(chudnovsky_pi(5), 30)


def test_bit_burst_path_evaluates_arctan():
    # evaluate at a dyadic approximation of pi/4 through the burst path
    target = chudnovsky_pi(40).scale(mpq(1, 4))
    path = bit_burst_path(target, 30)
    enc = eval_dfinite(ATAN, path[-1], 30, path=path[:-1])
    with mpmath.workdps(60):
        w = path[-1]
        assert enc.contains_mp(mpmath.atan(mpmath.mpf(int(w.numerator)) / int(w.denominator)))
