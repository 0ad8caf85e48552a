import json
import sys
from pathlib import Path

import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dfinite.exact import QQ, Poly, RatFunc
from dfinite.ore import OrePoly, OreRing, euclid

euclid.CHECK_POSTCONDITIONS = True

settings.register_profile(
    "dfinite", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("dfinite")

ORACLES = json.loads((Path(__file__).parent / "oracles" / "oracle_values.json").read_text())

DIFF = OreRing.diff("x")
SHIFT = OreRing.shift("n")

small_int = st.integers(min_value=-6, max_value=6)
rationals = st.builds(lambda a, b: mpq(a, b), st.integers(-20, 20), st.integers(1, 7))


def polys(max_deg=4, elems=rationals, nonzero=False):
    p = st.lists(elems, min_size=0, max_size=max_deg + 1).map(lambda c: Poly(c, QQ))
    if nonzero:
        p = p.filter(lambda q: not q.is_zero())
    return p


def ratfuncs(max_deg=3):
    return st.tuples(polys(max_deg), polys(max_deg, nonzero=True)).map(
        lambda nd: RatFunc(nd[0], nd[1]))


@st.composite
def operators(draw, ring, max_order=3, max_deg=2, min_order=0, elems=small_int):
    r = draw(st.integers(min_order, max_order))
    coeffs = [draw(polys(max_deg, elems.map(mpq))) for _ in range(r)]
    coeffs.append(draw(polys(max_deg, elems.map(mpq), nonzero=True)))
    return OrePoly(ring, [RatFunc.from_poly(c) for c in coeffs])


@pytest.fixture
def oracles():
    return ORACLES


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        line = f"criterion {n} ({mod.TITLES[n]}): {'PASS' if ok else 'FAIL'}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
