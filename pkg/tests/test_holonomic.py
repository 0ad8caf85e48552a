from itertools import combinations_with_replacement
from math import factorial

import pytest
from gmpy2 import mpq

from conftest import DIFF, SHIFT
from dfinite.cli.parse import parse_operator
from dfinite.exact import field_for
from dfinite.holonomic import (DFiniteFunction, PRecSequence, SingularPointError,
                               confinement_vectors, constant_function, dfinite_mul, is_ordinary,
                               is_zero, product_annihilator, prove_equal, rec_mul,
                               rec_prove_equal, unroll)
from dfinite.ore import OreRing, normal_form, ore_lclm, ore_apply, right_divides

N_TERMS = 50


def D(text):
    return parse_operator(text, DIFF)


def S(text, ring=SHIFT):
    return parse_operator(text, ring)


def binom_half(k):
    out = mpq(1)
    for i in range(k):
        out = out * (mpq(1, 2) - i) / (i + 1)
    return out


# name -> (operator, closed-form Taylor coefficient)
FIXTURES = {
    "exp": ("Dx - 1", lambda k: mpq(1, factorial(k))),
    "sin": ("Dx^2 + 1", lambda k: mpq((-1) ** (k // 2), factorial(k)) if k % 2 else mpq(0)),
    "cos": ("Dx^2 + 1", lambda k: mpq(0) if k % 2 else mpq((-1) ** (k // 2), factorial(k))),
    "geom": ("(1-x)*Dx - 1", lambda k: mpq(1)),
    "sqrt1p": ("2*(1+x)*Dx - 1", binom_half),
    "arctan": ("(1+x^2)*Dx^2 + 2*x*Dx",
               lambda k: mpq((-1) ** (k // 2), k) if k % 2 else mpq(0)),
}


def fixture(name):
    op, coeff = FIXTURES[name]
    L = D(op)
    return DFiniteFunction(L, tuple(coeff(k) for k in range(L.order))), \
        [coeff(k) for k in range(N_TERMS + 10)]


def convolve(a, b):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(min(len(a), len(b)))]


def assert_annihilates(L, series):
    assert all(v == 0 for v in ore_apply(L, series))


PAIRS = list(combinations_with_replacement(sorted(FIXTURES), 2))


@pytest.mark.parametrize("a,b", PAIRS)
def test_sum_against_series_oracle(a, b):
    f, fs = fixture(a)
    g, gs = fixture(b)
    oracle = [x + y for x, y in zip(fs, gs)]
    try:
        h = f + g
    except SingularPointError:
        # origin is an apparent singularity of the lclm: refused, but the
        # operator itself must still annihilate the sum
        L = ore_lclm(f.ann, g.ann)
        assert not is_ordinary(L, 0)
        assert_annihilates(L, oracle)
        return
    assert h.order <= f.order + g.order
    assert h.series(N_TERMS) == oracle[:N_TERMS]
    assert_annihilates(h.ann, oracle)


@pytest.mark.parametrize("a,b", PAIRS)
def test_product_against_series_oracle(a, b):
    f, fs = fixture(a)
    g, gs = fixture(b)
    oracle = convolve(fs, gs)
    try:
        h = f * g
    except SingularPointError:
        L = product_annihilator(f.ann, g.ann)
        assert not is_ordinary(L, 0)
        assert_annihilates(L, oracle)
        return
    assert h.order <= f.order * g.order
    assert h.series(N_TERMS) == oracle[:N_TERMS]
    assert_annihilates(h.ann, oracle)


def test_add_zero():
    f, _ = fixture("arctan")
    z = constant_function(0, DIFF)
    assert is_zero((f + z) - f)


def test_exp_plus_exp():
    f, fs = fixture("exp")
    h = f + f
    assert right_divides(D("Dx - 1"), h.ann)
    assert h.series(20) == [2 * v for v in fs[:20]]


def test_exp_squared():
    f, _ = fixture("exp")
    h = dfinite_mul(f, f)
    assert h.ann == D("Dx - 2")


def test_sine_square_confinement_rows():
    y = D("Dx^2 + 1")
    vectors, basis, rel = confinement_vectors([y, y], symmetric=True)
    assert basis == [(0, 0), (0, 1), (1, 1)]
    rows = [[v.const_value() for v in vec] for vec in vectors]
    assert rows == [[1, 0, 0], [0, 2, 0], [-2, 0, 2], [0, -8, 0]]
    sin, _ = fixture("sin")
    assert (sin * sin).ann == D("Dx^3 + 4*Dx")


def test_sin_cos_identity():
    sin, _ = fixture("sin")
    cos, _ = fixture("cos")
    res = prove_equal(sin * sin + cos * cos, constant_function(1, DIFF))
    assert res.proved
    assert res.order == 4 and res.checked == 4
    w = sin * sin + cos * cos - 1
    assert w.series(4) == [0, 0, 0, 0]


def test_exp_not_linear():
    f, _ = fixture("exp")
    g = DFiniteFunction(D("Dx^2"), (1, 1))
    assert not is_zero(f - g)
    assert (f - g).series(3)[2] == mpq(1, 2)


def test_zero_with_inflated_annihilator():
    z = DFiniteFunction(D("Dx^3 + x*Dx"), (0, 0, 0))
    assert is_zero(z)


def test_singular_point_refused():
    f = DFiniteFunction(D("x*Dx - 1"), (0, 1, 0))
    with pytest.raises(SingularPointError):
        is_zero(f)


def test_initial_data_checked():
    with pytest.raises(ValueError):
        DFiniteFunction(D("x*Dx - 1"), (1, 1))


@pytest.mark.parametrize("a,b", PAIRS)
def test_prove_equal_reflexive_symmetric_and_series_agreement(a, b):
    f, fs = fixture(a)
    g, gs = fixture(b)
    assert prove_equal(f, f).proved
    try:
        r1 = prove_equal(f, g)
    except SingularPointError:
        with pytest.raises(SingularPointError):
            prove_equal(g, f)
        return
    r2 = prove_equal(g, f)
    assert r1.proved == r2.proved
    assert r1.proved == (f.series(200) == g.series(200))


# sequences --------------------------------------------------------------------

def fib():
    return PRecSequence(S("Sn^2 - Sn - 1"), (0, 1))


def test_fibonacci_unroll():
    assert unroll(fib(), 10)[-1] == 55


def test_partial_sums_of_e():
    e = PRecSequence(S("(n+2)*Sn^2 - (n+3)*Sn + 1"), (1, 2))
    assert e[3] == mpq(8, 3)
    assert unroll(e, 12) == [sum(mpq(1, factorial(k)) for k in range(n + 1)) for n in range(13)]


def test_airy_interleaving():
    R = S("(n+1)*(n+2)*Sn^2 - Sn_inv")
    u = PRecSequence(R, (1, 0, 0))
    terms = u.terms(30)
    for n in range(1, 28):
        assert terms[n + 2] == terms[n - 1] / ((n + 1) * (n + 2))
    assert terms[3] == mpq(1, 6) and terms[9] == mpq(1, 12960)


def test_prefix_must_cover_singular_indices():
    with pytest.raises(ValueError, match="initial terms required"):
        PRecSequence(S("(n-3)*Sn - 1"), (1,))
    # u_4 is free because the leading coefficient vanishes at n = 3
    u = PRecSequence(S("(n-3)*Sn - (n-2)"), (1, mpq(2, 3), mpq(1, 3), 0, 7))
    assert u.terms(8) == [1, mpq(2, 3), mpq(1, 3), 0, 7, 14, 21, 28]
    with pytest.raises(ValueError, match="initial terms required"):
        PRecSequence(S("(n-3)*Sn - (n-2)"), (1, mpq(2, 3), mpq(1, 3), 0))


def test_prefix_checked():
    with pytest.raises(ValueError, match="violate"):
        PRecSequence(S("Sn^2 - Sn - 1"), (0, 1, 2))


def test_cassini():
    F = fib()
    lhs = F.shift(2) * F - F.shift(1) * F.shift(1)
    alt = PRecSequence(S("Sn + 1"), (1,))
    assert rec_prove_equal(lhs, -alt).proved
    assert not rec_prove_equal(lhs, alt).proved


def test_ones_times_sequence():
    ones = PRecSequence(S("Sn - 1"), (1,))
    F = fib()
    assert (ones * F).terms(30) == F.terms(30)


def test_hermite_product_recurrence():
    Fp = field_for(("x", "y"))
    R = OreRing.shift("n", Fp)
    x, y = Fp.gen("x"), Fp.gen("y")
    Hx = PRecSequence(S("Sn^2 - 2*x*Sn + 2*(n+1)", R), (1, 2 * x))
    Hy = PRecSequence(S("Sn^2 - 2*y*Sn + 2*(n+1)", R), (1, 2 * y))
    inv_fact = PRecSequence(S("(n+1)*Sn - 1", R), (1,))
    c = rec_mul(rec_mul(Hx, Hy), inv_fact)
    expected = S("(n+4)*Sn^4 - 4*x*y*Sn^3 + (8*x^2+8*y^2-8*n-20)*Sn^2 - 16*x*y*Sn + 16*n+16", R)
    assert normal_form(c.ann) == normal_form(expected)
    assert c.terms(3)[2] == (4 * x * x - 2) * (4 * y * y - 2) / 2
