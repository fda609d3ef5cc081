import itertools
import random

import pytest

from addfrob.additive import F_SORT, R_SORT, Var
from addfrob.gf import FieldSpec
from addfrob.poly import Poly
from addfrob.ratfun import Localization, RatFunc, parse_ratfunc
from addfrob.logic.ast import (
    And, Eq, Exists, Forall, FormulaSortError, Fresh, Implies, InF, Lin, Not, Or, TAdd, TConst, TFrob, TMul, TVar,
    all_vars, free_vars, lin, nnf,
)
from addfrob.logic.semantics import (
    BoundedEvaluator, eval_bounded_over_R, eval_sigma_naive, eval_sigma_over_F, r_elements,
)
from addfrob.logic.syntax import format_formula, format_sigma, parse_formula, parse_sigma
from addfrob.logic.transform import (
    ShapeError, bounded_height_formula, eliminate_negations, enf_formula, merge_equations, prenex_formula,
    sentence_to_sigma, to_existential_normal_form,
)
from addfrob.ratfun import height_or_zero, in_ring

from conftest import F2, F3, F4


def term(rng, vars, spec, with_z):
    base = spec.prime_field()
    parts = []
    for _ in range(rng.randint(1, 3)):
        if vars and rng.random() < 0.8:
            t = TVar(rng.choice(vars))
            if rng.random() < 0.4:
                t = TFrob(t, rng.randint(1, 2))
            c = Poly(base, [rng.randrange(spec.p) for _ in range(3 if with_z else 1)])
            if not c.is_zero() and not c.is_one():
                t = TMul(c, t)
        else:
            t = TConst(Poly.constant(base, rng.randrange(spec.p)))
        parts.append(t)
    return parts[0] if len(parts) == 1 else TAdd(tuple(parts))


def formula(rng, vars, spec, depth, names, with_z=False, sorts=(F_SORT,)):
    r = rng.random()
    if depth == 0 or r < 0.3:
        a = Eq(term(rng, vars, spec, with_z), term(rng, vars, spec, with_z))
        return Not(a) if rng.random() < 0.4 else a
    if r < 0.55:
        v = Var(f"a{next(names)}", rng.choice(sorts))
        body = formula(rng, vars + [v], spec, depth - 1, names, with_z, sorts)
        return (Exists if rng.random() < 0.5 else Forall)(v, body)
    args = tuple(formula(rng, vars, spec, depth - 1, names, with_z, sorts) for _ in range(rng.randint(2, 3)))
    k = rng.random()
    if k < 0.4:
        return And(args)
    if k < 0.8:
        return Or(args)
    if k < 0.9:
        return Implies(args[0], args[1])
    return Not(args[0])


def random_sigma(rng, spec, depth=4):
    a = Var("a", F_SORT)
    return Exists(a, formula(rng, [a], spec, depth, itertools.count()))


# ---------------------------------------------------------------------------
# syntax

def test_parse_examples():
    phi = parse_formula("exists x:R (x + x = 0)", F2)
    assert isinstance(phi, Exists) and phi.var.sort == R_SORT
    with pytest.raises((ValueError, FormulaSortError)):
        parse_formula("exists x:R (P{a1 : a1 = 0}(x))", F2)
    with pytest.raises(ValueError):
        parse_formula("exists x:R (x + = 0)", F2)


def test_roundtrip_random():
    rng = random.Random(21)
    for _ in range(100):
        spec = rng.choice([F2, F3])
        a = Var("x", R_SORT)
        phi = Forall(a, formula(rng, [a], spec, 3, itertools.count(), True, (F_SORT, R_SORT)))
        text = format_formula(phi, spec.p)
        again = parse_formula(text, spec)
        assert format_formula(again, spec.p) == text
        assert free_vars(again) == free_vars(phi)


def test_sigma_roundtrip_is_semantic():
    rng = random.Random(22)
    for _ in range(60):
        spec = rng.choice([F2, F3, F4])
        phi = random_sigma(rng, spec, 3)
        again = parse_sigma(format_sigma(phi, spec.p), spec)
        assert eval_sigma_over_F(again, None, spec) == eval_sigma_over_F(phi, None, spec)


# ---------------------------------------------------------------------------
# semantics over F

def test_eval_sigma_examples():
    # exhaustive: a = 1 satisfies a + a = 0 and a != 0 in F_2
    assert eval_sigma_over_F(parse_sigma("exists a (a + a = 0 and a != 0)", F2), None, F2)
    assert not eval_sigma_over_F(parse_sigma("exists a (a + a = 0 and a != 0)", F3), None, F3)
    fermat = "forall a (a^p = a)"
    for spec in (F2, F3, FieldSpec(5)):
        assert eval_sigma_over_F(parse_sigma(fermat, spec), None, spec)
    for spec in (F4, FieldSpec(3, 2)):
        assert not eval_sigma_over_F(parse_sigma(fermat, spec), None, spec)


def test_block_solver_matches_naive():
    rng = random.Random(23)
    for _ in range(150):
        spec = rng.choice([F2, F3, F4])
        phi = random_sigma(rng, spec)
        assert eval_sigma_over_F(phi, None, spec) == eval_sigma_naive(phi, None, spec)


# ---------------------------------------------------------------------------
# bounded semantics in R

def test_r_elements(L2):
    els = r_elements(L2, 2)
    assert len(set(els)) == len(els)
    assert all(in_ring(x, L2) and height_or_zero(x) <= 2 for x in els)
    assert parse_ratfunc("1/z^2", F2) in els and parse_ratfunc("z/(z^2)", F2) in els


def test_bounded_height_formula_exact(L2):
    x = Var("x", R_SORT)
    k = 2
    phi = bounded_height_formula(k, x, L2)
    loose = bounded_height_formula(k, x, L2, loose=True)
    for val in r_elements(L2, 4):
        expect = height_or_zero(val) <= k
        assert eval_bounded_over_R(phi, {x: val}, L2, cap=4) == expect
        if expect:
            assert eval_bounded_over_R(loose, {x: val}, L2, cap=4)


def test_merge_equations(L2):
    x, y = Var("x", R_SORT), Var("y", R_SORT)
    m = merge_equations([Lin.var(F2, x), Lin.var(F2, y)], L2)
    ev = BoundedEvaluator(L2, cap=2)
    for a, b in itertools.product(r_elements(L2, 1), repeat=2):
        env = {x: a, y: b}
        assert m.evaluate(env).is_zero() == (a.is_zero() and b.is_zero())


def test_eliminate_negations(L2):
    phi = parse_formula("forall x:R (not inF(x) or x^2 = x)", F2)
    psi = eliminate_negations(phi, L2)
    assert eliminate_negations(psi, L2) == psi
    x = Var("y", R_SORT)
    chi = parse_formula("not inF(y)", F2)
    rewritten = eliminate_negations(chi, L2)
    ev = BoundedEvaluator(L2, cap=2)
    for val in r_elements(L2, 2):
        assert ev.holds(rewritten, {x: val}) == ev.holds(chi, {x: val})


def test_enf_is_equivalent(L2):
    phi = parse_formula("exists y:R ((x = y^2 or x = z*y) and not x = 1)", F2)
    fresh = Fresh(all_vars(phi))
    enf = enf_formula(to_existential_normal_form(phi, L2, fresh))
    x = Var("x", R_SORT)
    # |x| <= 1 keeps every witness y (|y| <= |x| + 1) inside the cap
    for val in r_elements(L2, 1):
        assert eval_bounded_over_R(enf, {x: val}, L2, cap=2) == eval_bounded_over_R(phi, {x: val}, L2, cap=2)


def test_prenex_keeps_truth(L2):
    phi = parse_formula("(exists a:F (a = 1)) and forall b:F (b = b)", F2)
    assert eval_bounded_over_R(prenex_formula(phi), {}, L2) == eval_bounded_over_R(phi, {}, L2)


def test_sentence_examples():
    s = "exists x:R (x + x = 0 and x != 0)"
    for spec, truth in ((F2, True), (F3, False)):
        L = Localization(spec, ["z"])
        sigma = sentence_to_sigma(parse_formula(s, spec), L)
        assert eval_sigma_over_F(sigma, None, spec) == truth
    with pytest.raises(ShapeError):
        sentence_to_sigma(parse_formula("exists y:R (x = y)", F2), Localization(F2, ["z"]))
