from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SHIFT
from dfinite.cli.parse import parse_operator
from dfinite.holonomic import unroll
from dfinite.ore import normal_form, right_divides
from dfinite.telescope import (HyperTerm, TelescopingResult, definite_sum, gosper,
                               parse_summand, verify_certificate, zeilberger)
from dfinite.telescope.term import shift


def S(text):
    return parse_operator(text, SHIFT)


APERY = "binomial(n,k)^2*binomial(n+k,k)^2"
DIXON = "(-1)^k*binomial(2*n,k)^3"


def delta_k(term, R):
    """R(k+1) s(k) - R(k): the image of Delta_k(R t) / t."""
    return shift(R, term.K, term.k, 1) * term.s - R


# Gosper ------------------------------------------------------------------------

def test_gosper_linear():
    t = parse_summand("k")
    R = gosper(t)
    assert R == (t.gen("k") - 1) / 2
    assert delta_k(t, R) == t.K.one


def test_gosper_factorial():
    t = parse_summand("k*factorial(k)")
    assert gosper(t) == 1 / t.gen("k")


def test_gosper_harmonic_has_no_antidifference():
    assert gosper(parse_summand("1/k")) is None


@pytest.mark.parametrize("summand", [
    "binomial(n,k)", "k^2", "(-1)^k*binomial(n,k)", "k*2^k", "binomial(k,3)",
    "(2*k+1)*factorial(k)^2/factorial(2*k+2)",
])
def test_gosper_soundness(summand):
    t = parse_summand(summand)
    R = gosper(t)
    if R is not None:
        assert delta_k(t, R) == t.K.one


def test_gosper_on_binomial_row():
    # sum_k binomial(n,k) has no closed form in k; Gosper must say so
    assert gosper(parse_summand("binomial(n,k)")) is None
    assert gosper(parse_summand("(-1)^k*binomial(n,k)")) is not None


# Zeilberger --------------------------------------------------------------------

def test_binomial_row_sum():
    res = zeilberger(parse_summand("binomial(n,k)"))
    assert res.telescoper == S("Sn - 2")


def test_apery():
    t = parse_summand(APERY)
    res = zeilberger(t)
    assert res.telescoper == S("(n+2)^3*Sn^2 - (2*n+3)*(17*n^2+51*n+39)*Sn + (n+1)^3")
    # the classical relation, shifted n -> n+1
    shifted = S("(n+2)^3*Sn^2 - (34*(n+1)^3+51*(n+1)^2+27*(n+1)+5)*Sn + (n+1)^3")
    assert res.telescoper == shifted
    n, k = t.gen("n"), t.gen("k")
    # b_(n+1,k-1) / a_(n,k) with b/a = 4(2n+1)(k(2k+1) - (2n+1)^2)
    a_ratio = k ** 4 / ((n - k + 1) ** 2 * (n - k + 2) ** 2)
    expected = 4 * (2 * n + 3) * ((k - 1) * (2 * k - 1) - (2 * n + 3) ** 2) * a_ratio
    assert res.certificate == expected


def test_apery_classical_pair_verifies():
    t = parse_summand(APERY)
    n, k = t.gen("n"), t.gen("k")
    coeffs = ((n + 1) ** 3, -(34 * (n + 1) ** 3 + 51 * (n + 1) ** 2 + 27 * (n + 1) + 5),
              (n + 2) ** 3)
    a_ratio = k ** 4 / ((n - k + 1) ** 2 * (n - k + 2) ** 2)
    R = 4 * (2 * n + 3) * ((k - 1) * (2 * k - 1) - (2 * n + 3) ** 2) * a_ratio
    pair = TelescopingResult(S("Sn"), R, coeffs)
    assert verify_certificate(t, pair)


def test_dixon():
    res = zeilberger(parse_summand(DIXON))
    classical = S("(n+1)^2*Sn + 3*(3*n+2)*(3*n+1)")
    assert right_divides(classical, res.telescoper)


@pytest.mark.parametrize("summand", ["binomial(n,k)", APERY, DIXON, "binomial(n,k)^2",
                                     "binomial(n,k)*binomial(n,k)*k"])
def test_results_verify_and_perturbation_fails(summand):
    t = parse_summand(summand)
    res = zeilberger(t)
    assert verify_certificate(t, res)
    bad = TelescopingResult(res.telescoper, res.certificate + 1, res.coefficients)
    assert not verify_certificate(t, bad)


def test_order_bound_reported():
    with pytest.raises(ArithmeticError, match="no telescoper"):
        zeilberger(parse_summand(APERY), max_order=1)


# definite sums -----------------------------------------------------------------

ORACLES = {
    "binomial(n,k)": lambda n: sum(comb(n, k) for k in range(n + 1)),
    APERY: lambda n: sum(comb(n, k) ** 2 * comb(n + k, k) ** 2 for k in range(n + 1)),
    DIXON: lambda n: sum((-1) ** k * comb(2 * n, k) ** 3 for k in range(2 * n + 1)),
    "binomial(n,k)^2": lambda n: sum(comb(n, k) ** 2 for k in range(n + 1)),
}


@pytest.mark.parametrize("summand", sorted(ORACLES))
def test_definite_sum_matches_brute_force(summand):
    seq = definite_sum(parse_summand(summand))
    assert unroll(seq, 50) == [ORACLES[summand](n) for n in range(51)]


def test_known_closed_forms():
    two = definite_sum(parse_summand("binomial(n,k)"))
    assert normal_form(two.ann) == S("Sn - 2") and two.initial[0] == 1
    apery = definite_sum(parse_summand(APERY))
    assert apery.terms(2) == [1, 5]
    dixon = definite_sum(parse_summand(DIXON))
    assert unroll(dixon, 50) == [(-1) ** n * factorial(3 * n) // factorial(n) ** 3
                                for n in range(51)]


def test_unbounded_support_rejected():
    with pytest.raises(ValueError):
        definite_sum(parse_summand("1/factorial(k)"))


# hypergeometric terms ----------------------------------------------------------

@settings(max_examples=40)
@given(st.integers(1, 3), st.integers(0, 3), st.sampled_from([-2, -1, 1, 2, 3]),
       st.integers(1, 3))
def test_parsed_terms_are_compatible(a, b, c, e):
    t = parse_summand(f"binomial({a}*n+{b},k)^{e}*binomial(n+k,k)*({c})^k")
    assert t.compatible()


def test_incompatible_quotients_rejected():
    t = parse_summand("binomial(n,k)")
    with pytest.raises(ValueError, match="not compatible"):
        HyperTerm(t.r, t.s * t.gen("n"), t.K)


@pytest.mark.parametrize("summand", ["0^k*binomial(n,k)", "0*binomial(n,k)"])
def test_zero_factors_rejected(summand):
    with pytest.raises(ValueError, match="hypergeometric"):
        parse_summand(summand)
