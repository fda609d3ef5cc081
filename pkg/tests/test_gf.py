import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from addfrob.gf import (
    FieldElem, FieldError, FieldSpec, enumerate_field, field_arith, frobenius, parse_element, parse_field_spec,
    remains_irreducible,
)
from addfrob.poly import Poly, irreducibles

from conftest import F2, F4, F8, F9, SMALL_FIELDS, fields


def elems(spec):
    return st.integers(0, spec.order - 1).map(lambda v: FieldElem(spec, v))


def test_f4_examples():
    t = parse_element("t", F4)
    assert t * t == parse_element("t+1", F4)
    assert t.inverse() == parse_element("t+1", F4)
    assert frobenius(t) == parse_element("t+1", F4)
    for a in enumerate_field(F4):
        assert FieldElem(F4, 1) * a == a


def test_enumeration():
    assert [a.value for a in enumerate_field(F2)] == [0, 1]
    assert len(set(enumerate_field(F4))) == 4


def test_f9_closed_and_a_field():
    els = enumerate_field(F9)
    assert len(set(els)) == 9
    for a, b in itertools.product(els, repeat=2):
        assert a + b in els and a * b in els
    for a in els[1:]:
        assert a * a.inverse() == FieldElem(F9, 1)


def test_prime_field_frobenius_is_identity():
    for spec in (F2, FieldSpec(3), FieldSpec(7)):
        for a in enumerate_field(spec):
            assert frobenius(a) == a


@given(fields.flatmap(lambda s: st.tuples(elems(s), elems(s), elems(s))))
def test_field_axioms(abc):
    a, b, c = abc
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == FieldElem(a.spec, 0)
    if a:
        assert a / a == FieldElem(a.spec, 1)


@given(fields.flatmap(lambda s: st.tuples(elems(s), elems(s))))
def test_frobenius_additive_and_multiplicative(ab):
    a, b = ab
    assert frobenius(a + b) == frobenius(a) + frobenius(b)
    assert frobenius(a * b) == frobenius(a) * frobenius(b)
    assert frobenius(a) == a ** a.spec.p


def test_errors():
    with pytest.raises(ZeroDivisionError):
        FieldElem(F4, 0).inverse()
    with pytest.raises(FieldError):
        FieldElem(F4, 1) + FieldElem(F8, 1)
    with pytest.raises(FieldError):
        field_arith(FieldElem(F4, 1), FieldElem(F2, 1), "add")
    with pytest.raises(FieldError):
        FieldSpec(4)
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 0, 1))  # t^2 + 1 = (t + 1)^2


def test_parse_field_spec():
    assert parse_field_spec("p=2,m=2") == F4
    assert parse_field_spec("p=3") == FieldSpec(3)
    assert parse_field_spec("p=2, m=2, mod=t^2+t+1").modulus == (1, 1, 1)
    with pytest.raises(FieldError):
        parse_field_spec("m=2")


def test_remains_irreducible_examples():
    z = Poly.z(F2)
    q = z * z + z + 1
    for spec in (F2, F4, F8):
        assert remains_irreducible(z, spec)
    assert not remains_irreducible(q, F4)
    assert remains_irreducible(q, F8)


@pytest.mark.parametrize("spec", [F4, F8, F9])
def test_remains_irreducible_matches_root_search(spec):
    # degree <= 3 over F_p: irreducible over spec exactly when it has no root in spec
    base = spec.prime_field()
    for d in (2, 3):
        for q in irreducibles(base, d):
            has_root = any(q.change_field(spec)(a).value == 0 for a in enumerate_field(spec))
            assert remains_irreducible(q, spec) == (not has_root)


@pytest.mark.parametrize("spec", SMALL_FIELDS)
def test_tables_consistent(spec):
    t = spec.tables
    for a in range(spec.order):
        assert t.add[a, t.neg[a]] == 0
        if a:
            assert t.mul[a, t.inv[a]] == 1
