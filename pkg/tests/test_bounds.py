import random

import pytest

from addfrob.additive import eval_additive, parse_additive
from addfrob.bounds import (
    NotPBasicError, ReductionError, change_of_basis, check_reduction_witness, e_ord, falsification_scan,
    height_bound, image_decomposition, inverse_image, pole_order_bound, reduce_mod_image, splitting_exponents,
)
from addfrob.gf import FieldSpec
from addfrob.poly import Poly
from addfrob.ratfun import INFINITY, Localization, Place, RatFunc, RingMembershipError, ord_at, parse_poly, parse_ratfunc
from addfrob.suites import rand_p_basic, rand_ring_elem

from conftest import F2, F3, F4


def A(text, spec=F2):
    return parse_additive(text, spec)


def R(text, spec=F2):
    return parse_ratfunc(text, spec)


BASIC = "x1^2 + poly{z}*x2^2"


def test_change_of_basis_identity_examples():
    cb = change_of_basis(A(BASIC))
    assert cb.Delta.is_one()
    assert cb.verify(A(BASIC))
    with pytest.raises(NotPBasicError):
        change_of_basis(A("x1^2"))


def test_change_of_basis_random():
    rng = random.Random(11)
    for _ in range(40):
        spec = rng.choice([F2, F3])
        f = rand_p_basic(rng, spec, 1, max_cdeg=3)
        assert change_of_basis(f).verify(f)


def test_splitting_exponents():
    z = Poly.z(F2)
    assert splitting_exponents(Poly.one(F2)) == (1, 0)
    assert splitting_exponents(z * z) == (1, 1)
    rng = random.Random(12)
    for _ in range(50):
        spec = rng.choice([F2, F3])
        D = Poly(spec, [rng.randrange(spec.p) for _ in range(rng.randint(1, 6))] + [1])
        m, m0 = splitting_exponents(D)
        z = Poly.z(spec)
        assert D.divides(z ** (spec.p ** (m + m0)) - z ** (spec.p ** m0))


def test_e_ord_example():
    rep = e_ord(A(BASIC))
    assert (rep.m, rep.m0) == (1, 0)
    assert rep.eps == (0, 1) and rep.W == RatFunc.one(F2)
    assert rep.C == -1
    assert rep.Eord >= rep.threshold


def test_pole_bound_monotone_in_denominator_degree():
    f = A(BASIC)
    vals = [pole_order_bound(f, d) for d in range(8)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_reduction_examples(L2):
    f = A(BASIC)
    w = reduce_mod_image(f, R("1"), L2)
    assert w.u_prime == R("1") and all(x.is_zero() for x in w.x_tilde)
    u = R("1/z^9")
    w = reduce_mod_image(f, u, L2)
    assert check_reduction_witness(f, w, L2) == []
    assert w.u_prime.is_zero() or abs(ord_at(w.u_prime, Place(Poly.z(F2)))) <= w.Eord
    assert eval_additive(f, dict(zip(f.rvars(), w.x_tilde))) == w.u_prime - u
    with pytest.raises(RingMembershipError):
        reduce_mod_image(f, R("1/(z+1)"), L2)


def test_reduction_random():
    rng = random.Random(13)
    for _ in range(40):
        spec = rng.choice([F2, F4])
        L = Localization(spec, rng.choice([["z"], ["z", "z+1"]]))
        f = rand_p_basic(rng, spec, 1, max_cdeg=1)
        u = rand_ring_elem(rng, L, 12)
        for method in ("crt", "paper"):
            w = reduce_mod_image(f, u, L, method=method)
            assert check_reduction_witness(f, w, L) == []


def test_witness_checker_rejects_tampering(L2):
    f = A(BASIC)
    w = reduce_mod_image(f, R("1/z^9 + z^7"), L2)
    w.x_tilde = (w.x_tilde[0] + RatFunc.one(F2),) + tuple(w.x_tilde[1:])
    assert check_reduction_witness(f, w, L2)


def test_image_decomposition(L2):
    f = A(BASIC)
    dec = image_decomposition(f, RatFunc.zero(F2), L2)
    assert dec.recombine(f).is_zero()
    rng = random.Random(14)
    for _ in range(30):
        w = [rand_ring_elem(rng, L2, 5) for _ in f.rvars()]
        u = eval_additive(f, dict(zip(f.rvars(), w)))
        assert image_decomposition(f, u, L2).recombine(f) == u
        u = rand_ring_elem(rng, L2, 10)
        dec = image_decomposition(f, u, L2)
        assert dec.recombine(f) == u
        # G has N (1 + deg e) + 1 coefficients
        assert len(dec.term.G.vars) == dec.N * (1 + L2.e.deg) + 1


def test_height_bound_scan():
    # exhaustive oracle: every small-image x in the scan window obeys the bound
    L = Localization(F2, ["z"])
    rep = falsification_scan(A(BASIC), 3, L, margin=1)
    assert rep.violations == [] and rep.pairs > 0
    assert rep.max_height <= rep.h


def test_inverse_image_planted(L2):
    f = A(BASIC)
    rng = random.Random(15)
    for _ in range(5):
        w = tuple(RatFunc(Poly(F2, [rng.randrange(2) for _ in range(3)])) for _ in f.rvars())
        y = eval_additive(f, dict(zip(f.rvars(), w)))
        sols = inverse_image(f, y, L2)
        assert w in sols
        for x in sols:
            assert eval_additive(f, dict(zip(f.rvars(), x))) == y
    assert inverse_image(f, R("1/(z+1)"), L2) == []


def test_height_bound_fields(L2):
    hb = height_bound(A(BASIC), 2, L2)
    assert hb.h >= 2 and hb.ell == 2
