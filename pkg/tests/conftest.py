import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from addfrob.gf import FieldElem, FieldSpec
from addfrob.poly import Poly
from addfrob.ratfun import Localization, RatFunc

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")

F2, F3, F4, F8, F9 = FieldSpec(2), FieldSpec(3), FieldSpec(2, 2), FieldSpec(2, 3), FieldSpec(3, 2)
SMALL_FIELDS = (F2, F3, F4, FieldSpec(5), F9)

fields = st.sampled_from(SMALL_FIELDS)


@st.composite
def polys(draw, spec=None, max_deg=6, nonzero=False):
    spec = spec or draw(fields)
    n = draw(st.integers(0, max_deg + 1))
    cs = draw(st.lists(st.integers(0, spec.order - 1), min_size=n, max_size=n))
    f = Poly(spec, [FieldElem(spec, c) for c in cs])
    if nonzero and f.is_zero():
        f = Poly.one(spec)
    return f


@st.composite
def ratfuncs(draw, spec=None, max_deg=4):
    spec = spec or draw(fields)
    num = draw(polys(spec, max_deg))
    den = draw(polys(spec, max_deg, nonzero=True))
    return RatFunc(num, den)


@st.composite
def field_with_pair(draw, max_deg=4):
    spec = draw(fields)
    return spec, draw(ratfuncs(spec, max_deg)), draw(ratfuncs(spec, max_deg))


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def L2():
    return Localization(F2, ["z"])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
