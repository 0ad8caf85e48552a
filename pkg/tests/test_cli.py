import json
import subprocess
import sys

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DIFF, SHIFT, operators, polys, ratfuncs
from dfinite.cli.fixtures import check_fixture, load_fixtures
from dfinite.cli.main import run_command
from dfinite.cli.parse import ParseError, parse_operator
from dfinite.cli.printing import format_operator
from dfinite.cli.serialization import Session, dumps, loads
from dfinite.exact import field_for
from dfinite.holonomic import DFiniteFunction, PRecSequence
from dfinite.ore import OreRing, normal_form

FIXTURES = load_fixtures()


@pytest.mark.parametrize("fx", FIXTURES, ids=[f["name"] for f in FIXTURES])
def test_golden_fixture(fx):
    res = check_fixture(fx)
    assert res["ok"], res["output"]


def test_corpus_is_nonempty():
    assert len(FIXTURES) >= 20


# documented commands -----------------------------------------------------------

def test_airy_conversion():
    assert run_command(["convert", "--to", "rec", "Dx^2 - x"]) == (0, "(n+1)(n+2)*Sn^2 - Sn_inv")


def test_sin_cos_proof():
    code, text = run_command(["prove", "--lhs", "sin^2+cos^2", "--rhs", "1"])
    assert code == 0 and text == "PROVED, order 4, 4 coefficients checked"


def test_pi_digits_against_oracle(oracles):
    code, text = run_command(["digits", "pi", "--n", "100"])
    assert code == 0
    assert text == oracles["pi"][:101]
    with mpmath.workdps(120):
        assert text == mpmath.nstr(mpmath.pi, 130)[:101]


def test_fixture_runner_command():
    code, text = run_command(["fixtures"])
    assert code == 0
    assert "FAIL" not in text


# exit codes --------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["convert", "--to", "rec", "Dx^^2"],
    ["convert", "Dx"],
    ["nth", "fib"],
    ["mul", "Dx + Sn", "1", "--ore"],
    ["add", "Dx - 1", "Dx - q", "--init-a", "1", "--init-b", "1"],
    [],
])
def test_usage_errors_exit_1(argv):
    code, text = run_command(argv)
    assert code == 1
    assert text.startswith("error")


@pytest.mark.parametrize("argv", [
    ["add", "Dx - 1", "(1-x)*Dx - 1", "--init-a", "1", "--init-b", "1"],
    ["eval", "(1-x)*Dx - 1", "--init", "1", "--at", "2"],
    ["asympt", "Dx^2 + 1"],
    ["zeil", "--summand", "binomial(n,k)^2*binomial(n+k,k)^2", "--max-order", "1"],
    ["alg2deq", "(y^2-1-x)^2", "--prefix", "1"],
])
def test_refusals_exit_2(argv):
    code, text = run_command(argv)
    assert code == 2
    assert text


def test_json_error_shape():
    code, text = run_command(["frobnicate", "--json"])
    assert code == 1
    assert json.loads(text)["error"] == "usage"
    code, text = run_command(["asympt", "Dx^2 + 1", "--json"])
    assert code == 2
    assert json.loads(text)["error"] == "refused"


def test_console_entry_point():
    run = lambda *a: subprocess.run([sys.executable, "-m", "dfinite", *a],
                                    capture_output=True, text=True)
    ok = run("mul", "Dx", "x", "--ore")
    assert ok.returncode == 0 and ok.stdout.strip() == "x*Dx + 1"
    assert run("frobnicate").returncode == 1
    bad = run("asympt", "Dx^2 + 1")
    assert bad.returncode == 2 and bad.stderr.startswith("error")


# determinism -------------------------------------------------------------------

JSON_COMMANDS = [
    ["eval", "exp", "--at", "1", "--prec", "20"],
    ["nth", "fib", "--N", "100"],
    ["zeil", "--summand", "binomial(n,k)", "--sum"],
    ["classify", "x*(1-x)*Dx^2 + (1/5 - 11/6*x)*Dx - 1/6"],
    ["convert", "--to", "rec", "Dx^2 - x"],
    ["digits", "e", "--n", "40"],
]


@pytest.mark.parametrize("argv", JSON_COMMANDS, ids=[a[0] for a in JSON_COMMANDS])
def test_json_reports_are_byte_deterministic(argv):
    first = run_command(argv + ["--json"])
    second = run_command(argv + ["--json"])
    assert first == second
    assert first[0] == 0
    data = json.loads(first[1])
    assert json.dumps(data, sort_keys=True, indent=1) == first[1]


# serialization -----------------------------------------------------------------

@settings(max_examples=150)
@given(st.sampled_from([DIFF, SHIFT]).flatmap(lambda R: operators(R, max_order=4, max_deg=4)))
def test_operator_round_trip(L):
    assert loads(dumps(L)) == L
    assert dumps(loads(dumps(L))) == dumps(L)


@settings(max_examples=150)
@given(st.sampled_from([DIFF, SHIFT]).flatmap(lambda R: operators(R, max_order=4, max_deg=4)))
def test_print_parse_round_trip(L):
    L = normal_form(L)
    assert parse_operator(format_operator(L), L.ring) == L


@settings(max_examples=100)
@given(polys(6), ratfuncs(4))
def test_poly_and_ratfunc_round_trip(p, r):
    assert loads(dumps(p)) == p
    assert loads(dumps(r)) == r


@settings(max_examples=40)
@given(st.lists(st.fractions(max_denominator=50), min_size=2, max_size=2))
def test_function_and_sequence_round_trip(init):
    f = DFiniteFunction(parse_operator("(1+x^2)*Dx^2 + 2*x*Dx", DIFF), tuple(init))
    g = loads(dumps(f))
    assert g.ann == f.ann and g.series(20) == f.series(20)
    u = PRecSequence(parse_operator("Sn^2 - Sn - 1", SHIFT), tuple(init))
    v = loads(dumps(u))
    assert v.ann == u.ann and v.terms(30) == u.terms(30)


def test_parametric_operator_round_trip():
    F = field_for(("c",))
    L = parse_operator("(c^2*x^2+1)*Dx^2 + 2*c^2*x*Dx", OreRing.diff("x", F))
    assert loads(dumps(L)) == L
    assert parse_operator(format_operator(L), L.ring) == L


def test_session_bindings(tmp_path):
    path = str(tmp_path / "s.json")
    Session().save(path)
    code, _ = run_command(["convert", "--to", "rec", "Dx^2 - x", "--session", path, "--save", "airy"])
    assert code == 0
    assert "airy" in Session.load(path)
    code, text = run_command(["mul", "@airy", "1", "--ore", "--session", path])
    assert (code, text) == (0, "(n+1)(n+2)*Sn^2 - Sn_inv")
    assert run_command(["convert", "--to", "rec", "Dx", "--save", "x"])[0] == 1


def test_session_rejects_bad_names():
    with pytest.raises(ValueError):
        Session().bind("not a name", parse_operator("Dx", DIFF))


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_operator("Dx^2 + Qx", DIFF)
    assert info.value.pos == 7
    assert "unknown symbol 'Qx'" in str(info.value)


@pytest.mark.parametrize("argv,out", [
    (["mul", "n", "Sn", "--ore"], "n*Sn"),
    (["mul", "Sn", "n", "--ore"], "(n+1)*Sn"),
    (["mul", "1", "Sn", "--ore"], "Sn"),
    (["mul", "x", "Dx", "--ore"], "x*Dx"),
])
def test_bare_operand_takes_the_other_ring(argv, out):
    assert run_command(argv) == (0, out)
