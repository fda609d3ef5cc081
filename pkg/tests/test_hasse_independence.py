import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from addfrob.gf import FieldSpec
from addfrob.hasse import (
    HasseConsistencyError, binom_mod, check_p3, derivative_in_basis, hasse_derivative, hasse_derivatives,
)
from addfrob.independence import (
    DimensionError, check_certificate, independence_lift_check, is_independent, monomial_family, rank_oracle,
    wronskian_certificate,
)
from addfrob.poly import Poly
from addfrob.ratfun import RatFunc, parse_ratfunc
from addfrob.suites import inverse_rule

from conftest import F2, F3, F4, F8, field_with_pair, fields, ratfuncs


def R(text, spec=F2):
    return parse_ratfunc(text, spec)


def test_hasse_examples():
    assert hasse_derivative(R("z^3"), 1) == R("z^2")
    assert hasse_derivative(R("z^2"), 2) == R("1")
    assert hasse_derivative(R("1/z"), 1) == R("1/z^2")
    assert hasse_derivative(R("z^5", F3), 0) == R("z^5", F3)


def test_binom_mod_matches_math():
    from math import comb
    for p in (2, 3, 5):
        for n in range(30):
            for k in range(n + 1):
                assert binom_mod(n, k, p) == comb(n, k) % p


@given(field_with_pair(), st.integers(0, 7))
def test_p1_p2(sab, eps):
    _, f, g = sab
    assert hasse_derivative(f + g, eps) == hasse_derivative(f, eps) + hasse_derivative(g, eps)
    leib = RatFunc.zero(f.spec)
    for i in range(eps + 1):
        leib = leib + hasse_derivative(f, i) * hasse_derivative(g, eps - i)
    assert hasse_derivative(f * g, eps) == leib


@given(fields.flatmap(lambda s: ratfuncs(s, 3)), st.integers(0, 9), st.integers(1, 2))
def test_p3(x, eps, m):
    direct = check_p3(x, m, eps)
    pm = x.spec.p ** m
    if eps % pm:
        assert direct.is_zero()


def test_p3_examples():
    for x in (R("z"), R("1/(z+1)"), R("z^3 + z")):
        assert check_p3(x, 1, 1).is_zero()
        assert check_p3(x, 1, 2) == hasse_derivative(x, 1) ** 2


@given(fields.flatmap(lambda s: ratfuncs(s, 3)), st.integers(1, 6))
def test_p4_inverse_rule(x, eps):
    if x.is_zero():
        return
    assert hasse_derivative(x.inverse(), eps) == inverse_rule(x, eps)


@given(fields.flatmap(lambda s: ratfuncs(s, 3)), st.integers(0, 6))
def test_batched_derivatives_agree(x, upto):
    assert hasse_derivatives(x, upto) == [hasse_derivative(x, e) for e in range(upto + 1)]


@given(ratfuncs(F2, 4), st.integers(1, 2))
def test_derivative_in_basis(g, s):
    q = 2 ** s
    for eps in range(1, q):
        assert derivative_in_basis(g, s, eps) == hasse_derivative(g, eps)


def test_derivative_in_basis_examples():
    for eps in (1, 2, 3):
        assert derivative_in_basis(R("z^4"), 2, eps).is_zero()
    assert derivative_in_basis(R("z"), 1, 1) == R("1")
    with pytest.raises(ValueError):
        derivative_in_basis(R("z"), 1, 2)


def test_p3_hook_detects_corruption(monkeypatch):
    import addfrob.hasse as H
    real = H.hasse_derivative
    monkeypatch.setattr(H, "hasse_derivative", lambda x, e: real(x, e) + RatFunc.z(x.spec) if e else real(x, e))
    with pytest.raises(HasseConsistencyError):
        H.check_p3(R("z^3 + z"), 1, 2)


# ---------------------------------------------------------------------------
# independence

def test_wronskian_examples():
    assert wronskian_certificate([R("1"), R("z")], 1) == (0, 1)
    assert wronskian_certificate([R("1"), R("z^2")], 1) is None
    assert rank_oracle([R("1"), R("z")], 1) == 2
    assert rank_oracle([R("1"), R("z^2"), R("z^4")], 1) == 1
    with pytest.raises(DimensionError):
        wronskian_certificate([R("1"), R("z"), R("z^2")], 1)


def _rand_family(rng, spec, s):
    q = spec.p ** s
    n = rng.randint(1, q)
    fam = []
    for _ in range(n):
        num = Poly(spec, [rng.randrange(spec.order) for _ in range(rng.randint(1, 5))])
        den = Poly(spec, [rng.randrange(spec.order) for _ in range(rng.randint(0, 2))] + [1])
        fam.append(RatFunc(num, den))
    if n > 1 and rng.random() < 0.4:
        # force a dependence over F(z^q)
        w = RatFunc(Poly.monomial(spec, q * rng.randint(0, 2)))
        fam[-1] = fam[0] * w
    return fam


def test_certificate_agrees_with_rank_oracle():
    rng = random.Random(7)
    for _ in range(200):
        spec = rng.choice([F2, F3])
        s = rng.randint(1, 2) if spec.p == 2 else 1
        fam = _rand_family(rng, spec, s)
        cert = wronskian_certificate(fam, s)
        assert (cert is not None) == (rank_oracle(fam, s) == len(fam))
        if cert is not None:
            assert cert[0] == 0 and check_certificate(fam, cert)


def test_lexicographic_minimality():
    rng = random.Random(8)
    for _ in range(30):
        fam = _rand_family(rng, F2, 2)
        cert = wronskian_certificate(fam, 2)
        if cert is None or len(fam) < 2:
            continue
        for tail in itertools.combinations(range(1, 4), len(fam) - 1):
            if (0,) + tail == cert:
                break
            assert not check_certificate(fam, (0,) + tail)


def test_independence_stable_under_extension():
    assert independence_lift_check([R("1"), R("z")], 1, F4)
    rng = random.Random(9)
    for _ in range(100):
        fam = _rand_family(rng, F2, 1)
        ext = rng.choice([F4, F8])
        assert independence_lift_check(fam, 1, ext) == is_independent(fam, 1)


@pytest.mark.parametrize("p,s", [(2, 1), (2, 2), (3, 1)])
def test_monomials_exhaustive(p, s):
    spec = FieldSpec(p)
    q = p ** s
    for n in range(1, q + 1):
        for exps in itertools.combinations(range(7), n):
            fam = monomial_family(spec, exps)
            independent = len({e % q for e in exps}) == n
            assert (wronskian_certificate(fam, s) is not None) == independent
