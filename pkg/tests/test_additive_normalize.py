import random

import pytest

from addfrob.additive import (
    AdditivePoly, ProperTransformation, WitnessError, classify, compose_additive, eval_additive, format_additive,
    fvar, is_p_free, monomial, parse_additive, rvar,
)
from addfrob.gf import FieldSpec
from addfrob.normalize import (
    eliminate_dependence, equalize_degrees, normalize_full, p_basic_completion, strongly_normalize,
    symbolic_identity_holds,
)
from addfrob.poly import Poly
from addfrob.ratfun import Localization, RatFunc, parse_ratfunc
from addfrob.suites import rand_additive, rand_ring_elem

from conftest import F2, F3


def A(text, spec=F2):
    return parse_additive(text, spec)


def R(text, spec=F2):
    return parse_ratfunc(text, spec)


x1, x2 = rvar("x1"), rvar("x2")


def test_eval_examples():
    f = A("poly{z}*x1^2 + x1")
    assert eval_additive(f, {x1: R("z")}) == R("z^3 + z")
    g = A("x1^2 + poly{z+1}*x2 + a1")
    assert eval_additive(g, [R("0"), R("0"), R("0")]).is_zero()
    with pytest.raises(ValueError):
        eval_additive(g, [R("1")])


def test_compose_examples():
    f = A("x1^2")
    assert compose_additive(f, {x1: f}).same_as(A("x1^4"))
    g = A("poly{z}*x1^2 + x2")
    assert compose_additive(g, {x1: monomial(F2, x1)}).same_as(g)


def test_degree_examples():
    assert A("x1^2 + x2").degree() == 2
    assert A("x1").degree() == 1
    assert A("x1^3 + x1", F3).degree() == 3


def test_parse_format_roundtrip():
    rng = random.Random(3)
    for _ in range(100):
        spec = rng.choice([F2, F3])
        f = rand_additive(rng, spec, rng.randint(1, 3), 2, 3)
        assert A(format_additive(f), spec).same_as(f)


def test_additivity():
    rng = random.Random(4)
    L = Localization(F2, ["z"])
    for _ in range(50):
        f = rand_additive(rng, F2, 2, 2, 3)
        a = {v: rand_ring_elem(rng, L, 4) for v in f.vars}
        b = {v: rand_ring_elem(rng, L, 4) for v in f.vars}
        ab = {v: a[v] + b[v] for v in f.vars}
        assert eval_additive(f, ab) == eval_additive(f, a) + eval_additive(f, b)


def test_classify_examples():
    c = classify(A("x1^2 + poly{z}*x2^2"))
    assert c.normalized and c.p_basic and c.strongly_normalized and c.s == 1
    c = classify(A("x1^2 + poly{z^2}*x2^2"))
    assert not c.normalized and not c.strongly_normalized
    c = classify(A("x1^2"))
    assert c.normalized and not c.p_basic
    assert "p_basic" in classify(A("x1^2 + poly{z}*x2^2")).flags()


def test_proper_transformation_witness_checked():
    xi = ProperTransformation.identity(F2, [x1])
    assert xi.preimage([R("z")]) == ((R("z"),), ())
    bad = ProperTransformation(F2, [x1], [x1], [], [monomial(F2, x1)], lambda t: ((RatFunc.one(F2),), ()))
    with pytest.raises(WitnessError):
        bad.preimage([R("z")])


# ---------------------------------------------------------------------------
# normalization stages

def test_eliminate_dependence_example():
    f = A("x1^2 + poly{z^2}*x2^2")
    res = eliminate_dependence(f)
    assert res.identity_holds(f) and symbolic_identity_holds(f, res)
    deg_sum = lambda g: sum(g.p ** g.s(v) for v in g.coeffs if v.sort == "R")
    assert deg_sum(res.f_tilde) < deg_sum(f)
    assert res.steps == 1


def test_identity_on_normal_input():
    f = A("x1^2 + poly{z}*x2^2")
    for stage in (eliminate_dependence, equalize_degrees, strongly_normalize, normalize_full):
        res = stage(f)
        assert res.f_tilde.same_as(f) and res.G.is_zero()


def test_p_basic_completion_examples():
    assert p_basic_completion(A("x1^2 + poly{z}*x2^2")).is_zero()
    h = p_basic_completion(A("x1^2"))
    (v,) = h.coeffs
    assert h.coeff_list(v) == (Poly.zero(F2), Poly.z(F2))
    assert classify(A("x1^2") + h).p_basic


def test_stages_on_random_input():
    rng = random.Random(5)
    for _ in range(60):
        spec = rng.choice([F2, F3])
        f = rand_additive(rng, spec, rng.randint(1, 3), 2, 3)
        L = Localization(spec, rng.choice([[], ["z"]]))
        r1 = eliminate_dependence(f, L)
        assert r1.identity_holds(f)
        assert is_p_free(r1.f_tilde) or r1.f_tilde.is_zero()
        r2 = equalize_degrees(r1.f_tilde, L)
        assert r2.identity_holds(r1.f_tilde)
        assert classify(r2.f_tilde).normalized
        r3 = strongly_normalize(r2.f_tilde, L)
        assert r3.identity_holds(r2.f_tilde)
        assert classify(r3.f_tilde).strongly_normalized
        h = p_basic_completion(r3.f_tilde)
        c = classify(r3.f_tilde + h)
        assert c.p_basic and c.strongly_normalized


def test_normalize_full_properties():
    rng = random.Random(6)
    for _ in range(60):
        spec = rng.choice([F2, F3])
        f = rand_additive(rng, spec, rng.randint(1, 3), 2, 3)
        L = Localization(spec, ["z"])
        res = normalize_full(f, L)
        assert res.identity_holds(f)
        assert classify(res.f_tilde).strongly_normalized
        assert res.f_tilde.degree() <= f.degree()
        for _ in range(5):
            tgt = [rand_ring_elem(rng, L, 4) for _ in res.xi.targets]
            r, a = res.xi.preimage(tgt)
            assert res.xi.apply(r, a) == tuple(tgt)


def test_variable_count_can_grow():
    # a documented limitation: splitting a low-degree variable adds variables
    f = A("x1^4 + poly{z}*x2^2")
    res = normalize_full(f)
    assert res.identity_holds(f)
    assert len(res.f_tilde.rvars()) == 3 > len(f.rvars())
