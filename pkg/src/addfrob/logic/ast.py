"""Terms and formulas of the languages L_p, L_p(z) and L_p(z)^e.

Every term is additive in its variables plus a constant of F_p[z], so terms
are usually handled through their linear form :class:`Lin`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from ..additive import F_SORT, R_SORT, AdditivePoly, Var, eval_additive, monomial
from ..gf import FieldSpec
from ..poly import Poly
from ..ratfun import RatFunc


class FormulaSortError(ValueError):
    """A term or formula is ill-sorted."""


# ---------------------------------------------------------------------------
# terms

class Term:
    __slots__ = ()


@dataclass(frozen=True)
class TVar(Term):
    var: Var


@dataclass(frozen=True)
class TConst(Term):
    c: Poly  # over F_p


@dataclass(frozen=True)
class TAdd(Term):
    args: tuple


@dataclass(frozen=True)
class TNeg(Term):
    arg: Term


@dataclass(frozen=True)
class TFrob(Term):
    arg: Term
    k: int = 1


@dataclass(frozen=True)
class TMul(Term):
    """Multiplication by a fixed element of F_p[z] (``z*t`` is the core case)."""

    c: Poly
    arg: Term


@lru_cache(maxsize=1 << 17)
def term_vars(t: Term) -> frozenset:
    if isinstance(t, TVar):
        return frozenset((t.var,))
    if isinstance(t, TConst):
        return frozenset()
    if isinstance(t, TAdd):
        return frozenset().union(*(term_vars(a) for a in t.args))
    return term_vars(t.arg)


def term_has_z(t: Term) -> bool:
    if isinstance(t, TVar):
        return False
    if isinstance(t, TConst):
        return t.c.deg > 0
    if isinstance(t, TMul):
        return t.c.deg > 0 or term_has_z(t.arg)
    if isinstance(t, TAdd):
        return any(term_has_z(a) for a in t.args)
    return term_has_z(t.arg)


def subst_term(t: Term, mapping: dict) -> Term:
    if isinstance(t, TVar):
        return mapping.get(t.var, t)
    if isinstance(t, TConst):
        return t
    if isinstance(t, TAdd):
        return TAdd(tuple(subst_term(a, mapping) for a in t.args))
    if isinstance(t, TNeg):
        return TNeg(subst_term(t.arg, mapping))
    if isinstance(t, TFrob):
        return TFrob(subst_term(t.arg, mapping), t.k)
    return TMul(t.c, subst_term(t.arg, mapping))


# ---------------------------------------------------------------------------
# linear forms

class Lin:
    """``poly(vars) + const`` with poly additive over F_p[z] and const in F_p[z]."""

    __slots__ = ("poly", "const")

    def __init__(self, poly: AdditivePoly, const: Poly | None = None):
        self.poly = poly
        self.const = Poly.zero(poly.base) if const is None else const.change_field(poly.base)

    @classmethod
    def zero(cls, spec):
        return cls(AdditivePoly(spec, {}, []))

    @classmethod
    def constant(cls, spec, c):
        base = spec.prime_field()
        c = c if isinstance(c, Poly) else Poly.constant(base, c)
        return cls(AdditivePoly(spec, {}, []), c)

    @classmethod
    def var(cls, spec, v: Var, k=0, coeff=1):
        return cls(monomial(spec, v, k, coeff))

    @property
    def spec(self):
        return self.poly.spec

    def vars(self) -> set:
        return set(self.poly.coeffs)

    def is_const(self) -> bool:
        return not self.poly.coeffs

    def __add__(self, other):
        return Lin(self.poly + other.poly, self.const + other.const)

    def __neg__(self):
        return Lin(-self.poly, -self.const)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Lin":
        base = self.poly.base
        c = c if isinstance(c, Poly) else Poly.constant(base, c)
        c = c.change_field(base)
        return Lin(self.poly.scale(c), self.const * c)

    def frobenius(self, k=1) -> "Lin":
        return Lin(self.poly.frobenius(k), self.const.subs_power(self.spec.p ** k))

    def __eq__(self, other):
        return isinstance(other, Lin) and self.poly == other.poly and self.const == other.const

    def __hash__(self):
        return hash((self.poly, self.const))

    def __repr__(self):
        return f"Lin({self.poly} + {self.const.to_str()})"

    def restrict(self, vars) -> AdditivePoly:
        return self.poly.restrict([v for v in self.poly.vars if v in set(vars)])

    def drop(self, vars) -> "Lin":
        vars = set(vars)
        return Lin(self.poly.restrict([v for v in self.poly.vars if v not in vars]), self.const)

    def evaluate(self, env) -> RatFunc:
        spec = self.spec
        sub = {v: env[v] for v in self.poly.coeffs}
        val = eval_additive(self.poly, sub) if sub else RatFunc.zero(spec)
        return val + RatFunc(self.const.change_field(spec))

    def substitute(self, mapping: dict) -> "Lin":
        """Replace variables by linear forms."""
        spec = self.spec
        out = Lin(AdditivePoly(spec, {}, []), self.const)
        for v, cs in self.poly.coeffs.items():
            g = mapping.get(v)
            for k, c in enumerate(cs):
                if c.is_zero():
                    continue
                piece = Lin.var(spec, v, k) if g is None else g.frobenius(k)
                out = out + piece.scale(c)
        return out

    def z_coefficients(self) -> list:
        """Split ``sum_i z^i L_i`` into z-free linear forms ``L_i`` (needs F-variables only)."""
        spec = self.spec
        top = max([self.const.deg] + [c.deg for cs in self.poly.coeffs.values() for c in cs])
        out = []
        for i in range(top + 1):
            terms = {}
            for v, cs in self.poly.coeffs.items():
                terms[v] = [Poly.constant(c.spec, c.coeff(i).value) if i <= c.deg else Poly.zero(c.spec) for c in cs]
            const = Poly.constant(self.const.spec, self.const.coeff(i).value) if i <= self.const.deg else None
            out.append(Lin(AdditivePoly(spec, terms, self.poly.vars), const))
        return out

    def to_term(self) -> Term:
        parts = []
        for v in self.poly.vars:
            for k, c in enumerate(self.poly.coeffs.get(v, ())):
                if c.is_zero():
                    continue
                t = TVar(v)
                if k:
                    t = TFrob(t, k)
                if not c.is_one():
                    t = TMul(c, t)
                parts.append(t)
        if not self.const.is_zero():
            parts.append(TConst(self.const))
        if not parts:
            return TConst(Poly.zero(self.poly.base))
        return parts[0] if len(parts) == 1 else TAdd(tuple(parts))


@lru_cache(maxsize=65536)
def lin(t: Term, spec: FieldSpec) -> Lin:
    if isinstance(t, TVar):
        return Lin.var(spec, t.var)
    if isinstance(t, TConst):
        return Lin.constant(spec, t.c)
    if isinstance(t, TAdd):
        acc = Lin.zero(spec)
        for a in t.args:
            acc = acc + lin(a, spec)
        return acc
    if isinstance(t, TNeg):
        return -lin(t.arg, spec)
    if isinstance(t, TFrob):
        return lin(t.arg, spec).frobenius(t.k)
    if isinstance(t, TMul):
        return lin(t.arg, spec).scale(t.c)
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# formulas

class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class InF(Formula):
    arg: Term


@dataclass(frozen=True)
class Pred(Formula):
    """``P_sigma(args)``: args lie in F and sigma holds in F with params bound to args."""

    sigma: Formula
    params: tuple
    args: tuple

    def __post_init__(self):
        if len(self.params) != len(self.args):
            raise FormulaSortError("P_sigma arity mismatch")
        for a in self.args:
            if any(v.sort != F_SORT for v in term_vars(a)) or term_has_z(a):
                raise FormulaSortError("P_sigma takes F-sorted L_p terms")
        check_lp(self.sigma, self.params)


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple


@dataclass(frozen=True)
class Or(Formula):
    args: tuple


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: Var
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: Var
    body: Formula


def _cache_hash(cls):
    """Formulas are deep immutable trees; remember each node's hash after the first use."""
    plain = cls.__hash__

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = plain(self)
            object.__setattr__(self, "_hash", h)
        return h

    cls.__hash__ = __hash__


for _cls in (TVar, TConst, TAdd, TNeg, TFrob, TMul, Eq, InF, Pred, Not, And, Or, Implies, Exists, Forall):
    _cache_hash(_cls)


TRUE = And(())
FALSE = Or(())


def conj(*args) -> Formula:
    out = []
    for a in args:
        if a == TRUE:
            continue
        if a == FALSE:
            return FALSE
        out.extend(a.args if isinstance(a, And) else [a])
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*args) -> Formula:
    out = []
    for a in args:
        if a == FALSE:
            continue
        if a == TRUE:
            return TRUE
        out.extend(a.args if isinstance(a, Or) else [a])
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def neg(a: Formula) -> Formula:
    if a == TRUE:
        return FALSE
    if a == FALSE:
        return TRUE
    if isinstance(a, Not):
        return a.arg
    return Not(a)


def exists(vars, body: Formula) -> Formula:
    for v in reversed(list(vars)):
        if v in free_vars(body):
            body = Exists(v, body)
    return body


def forall(vars, body: Formula) -> Formula:
    for v in reversed(list(vars)):
        if v in free_vars(body):
            body = Forall(v, body)
    return body


def eq0(L: Lin) -> Formula:
    """``L = 0`` as an atom (constants fold to true/false)."""
    if L.is_const():
        return TRUE if L.const.is_zero() else FALSE
    lhs, rhs = _split_sides(L)
    return Eq(lhs, rhs)


def neq0(L: Lin) -> Formula:
    return neg(eq0(L))


def _split_sides(L: Lin):
    """Readable ``lhs = rhs`` from ``L = 0``: the constant moves right."""
    spec = L.spec
    lhs = Lin(L.poly).to_term()
    rhs = Lin.constant(spec, -L.const).to_term()
    return lhs, rhs


@lru_cache(maxsize=1 << 17)
def free_vars(phi: Formula) -> frozenset:
    if isinstance(phi, Eq):
        return term_vars(phi.lhs) | term_vars(phi.rhs)
    if isinstance(phi, InF):
        return term_vars(phi.arg)
    if isinstance(phi, Pred):
        return frozenset().union(*(term_vars(a) for a in phi.args))
    if isinstance(phi, Not):
        return free_vars(phi.arg)
    if isinstance(phi, (And, Or)):
        return frozenset().union(*(free_vars(a) for a in phi.args))
    if isinstance(phi, Implies):
        return free_vars(phi.lhs) | free_vars(phi.rhs)
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def all_vars(phi: Formula) -> set:
    """Free and bound variables (P_sigma internals excluded)."""
    if isinstance(phi, (Exists, Forall)):
        return all_vars(phi.body) | {phi.var}
    if isinstance(phi, Not):
        return all_vars(phi.arg)
    if isinstance(phi, (And, Or)):
        return set().union(*(all_vars(a) for a in phi.args)) if phi.args else set()
    if isinstance(phi, Implies):
        return all_vars(phi.lhs) | all_vars(phi.rhs)
    return free_vars(phi)


def subst(phi: Formula, mapping: dict, fresh: "Fresh | None" = None) -> Formula:
    """Capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return phi
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.lhs, mapping), subst_term(phi.rhs, mapping))
    if isinstance(phi, InF):
        return InF(subst_term(phi.arg, mapping))
    if isinstance(phi, Pred):
        return Pred(phi.sigma, phi.params, tuple(subst_term(a, mapping) for a in phi.args))
    if isinstance(phi, Not):
        return Not(subst(phi.arg, mapping, fresh))
    if isinstance(phi, And):
        return And(tuple(subst(a, mapping, fresh) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(subst(a, mapping, fresh) for a in phi.args))
    if isinstance(phi, Implies):
        return Implies(subst(phi.lhs, mapping, fresh), subst(phi.rhs, mapping, fresh))
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k != phi.var}
        var, body = phi.var, phi.body
        incoming = set().union(*(term_vars(t) for t in inner.values())) if inner else set()
        if var in incoming:
            fresh = fresh or Fresh(all_vars(phi) | incoming | set(inner))
            new = fresh.var(var.name, var.sort)
            body = subst(body, {var: TVar(new)}, fresh)
            var = new
        return type(phi)(var, subst(body, inner, fresh))
    raise TypeError(f"not a formula: {phi!r}")


def check_lp(sigma: Formula, params=()) -> None:
    """Raise unless sigma is an L_p formula whose free variables are among params."""
    def walk(phi, bound):
        if isinstance(phi, Eq):
            for t in (phi.lhs, phi.rhs):
                if term_has_z(t):
                    raise FormulaSortError("L_p terms may not use z")
                if any(v.sort != F_SORT for v in term_vars(t)):
                    raise FormulaSortError("L_p variables are F-sorted")
            return
        if isinstance(phi, (InF, Pred)):
            raise FormulaSortError("L_p has no inF or P atoms")
        if isinstance(phi, Not):
            return walk(phi.arg, bound)
        if isinstance(phi, (And, Or)):
            for a in phi.args:
                walk(a, bound)
            return
        if isinstance(phi, Implies):
            walk(phi.lhs, bound)
            walk(phi.rhs, bound)
            return
        if isinstance(phi, (Exists, Forall)):
            if phi.var.sort != F_SORT:
                raise FormulaSortError("L_p quantifiers range over F")
            return walk(phi.body, bound | {phi.var})
        raise TypeError(f"not a formula: {phi!r}")

    walk(sigma, frozenset())
    extra = free_vars(sigma) - set(params)
    if extra:
        raise FormulaSortError(f"free variables {sorted(v.name for v in extra)} not among the parameters")


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Exists, Forall)):
        return False
    if isinstance(phi, Not):
        return is_quantifier_free(phi.arg)
    if isinstance(phi, (And, Or)):
        return all(is_quantifier_free(a) for a in phi.args)
    if isinstance(phi, Implies):
        return is_quantifier_free(phi.lhs) and is_quantifier_free(phi.rhs)
    return True


def size(phi: Formula) -> int:
    if isinstance(phi, Not):
        return 1 + size(phi.arg)
    if isinstance(phi, (And, Or)):
        return 1 + sum(size(a) for a in phi.args)
    if isinstance(phi, Implies):
        return 1 + size(phi.lhs) + size(phi.rhs)
    if isinstance(phi, (Exists, Forall)):
        return 1 + size(phi.body)
    if isinstance(phi, Pred):
        return 1 + size(phi.sigma)
    return 1


class Fresh:
    """Deterministic supply of variable names avoiding a used set."""

    def __init__(self, used=()):
        self.used = {v.name if isinstance(v, Var) else v for v in used}
        self.counter = itertools.count()

    def var(self, stem: str, sort: str = R_SORT) -> Var:
        stem = stem.rstrip("0123456789_") or "v"
        while True:
            name = f"{stem}_{next(self.counter)}"
            if name not in self.used:
                self.used.add(name)
                return Var(name, sort)

    def vars(self, stem, sort, n) -> list:
        return [self.var(stem, sort) for _ in range(n)]

    def reserve(self, vars):
        self.used |= {v.name for v in vars}


@lru_cache(maxsize=65536)
def nnf(phi: Formula) -> Formula:
    """Negation normal form: no implications, negations only on atoms."""
    if isinstance(phi, (Eq, InF, Pred)):
        return phi
    if isinstance(phi, And):
        return conj(*(nnf(a) for a in phi.args))
    if isinstance(phi, Or):
        return disj(*(nnf(a) for a in phi.args))
    if isinstance(phi, Implies):
        return disj(nnf(neg(phi.lhs)), nnf(phi.rhs))
    if isinstance(phi, Exists):
        return Exists(phi.var, nnf(phi.body))
    if isinstance(phi, Forall):
        return Forall(phi.var, nnf(phi.body))
    a = phi.arg
    if isinstance(a, (Eq, InF, Pred)):
        return phi
    if isinstance(a, Not):
        return nnf(a.arg)
    if isinstance(a, And):
        return disj(*(nnf(neg(b)) for b in a.args))
    if isinstance(a, Or):
        return conj(*(nnf(neg(b)) for b in a.args))
    if isinstance(a, Implies):
        return conj(nnf(a.lhs), nnf(neg(a.rhs)))
    if isinstance(a, Exists):
        return Forall(a.var, nnf(neg(a.body)))
    if isinstance(a, Forall):
        return Exists(a.var, nnf(neg(a.body)))
    raise TypeError(f"not a formula: {phi!r}")
