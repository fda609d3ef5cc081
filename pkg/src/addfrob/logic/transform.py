"""Syntactic transformations: prenex and normal forms, image membership
turned into formulas, universalization of bounded existentials, and the
translation of sentences into L_p sentences about F.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable

from ..additive import F_SORT, R_SORT, AdditivePoly, Var, eval_additive
from ..bounds import bounded_term_for, height_bound
from ..gf import remains_irreducible
from ..normalize import normalize_full, p_basic_completion
from ..poly import Poly, irreducibles
from ..ratfun import Localization, RatFunc
from .ast import (
    FALSE, TRUE, And, Eq, Exists, Forall, Formula, Fresh, Implies, InF, Lin, Not, Or, Pred, TAdd,
    TVar, all_vars, check_lp, conj, disj, eq0, exists, forall, free_vars, lin, neg, neq0, nnf, size,
    subst,
)
from .semantics import ResourceLimitError


class ShapeError(ValueError):
    """Input does not have the shape a transformation requires."""


# ---------------------------------------------------------------------------
# small helpers

def _base(L: Localization):
    return L.spec.prime_field()


def _z(L: Localization, i: int = 1) -> Poly:
    return Poly.monomial(_base(L), i)


def _fp(P: Poly, L: Localization) -> Poly:
    return P.change_field(_base(L))


def aux_irreducible(L: Localization) -> Poly:
    """Smallest monic F_p-irreducible outside S that stays irreducible over F."""
    base = _base(L)
    S = {_fp(s, L) for s in L.S}
    d = 1
    while True:
        for q in irreducibles(base, d):
            if q not in S and remains_irreducible(q, L.spec):
                return q
        d += 1


def poly_in(L: Localization, vars) -> Lin:
    """``sum_i z^i a_i`` for F-variables a_0, a_1, ..."""
    acc = Lin.zero(L.spec)
    for i, a in enumerate(vars):
        acc = acc + Lin.var(L.spec, a, 0, _z(L, i))
    return acc


def _lp_atom(Ln: Lin, kind: str) -> Formula:
    """Split an F-variable linear form along powers of z: ``= 0`` for all, or ``!= 0`` for one."""
    if any(v.sort != F_SORT for v in Ln.vars()):
        raise ShapeError("only F-variables may occur here")
    parts = Ln.z_coefficients()
    if kind == "eq":
        return conj(*(eq0(c) for c in parts))
    return disj(*(neq0(c) for c in parts))


def inline_preds(phi: Formula, fresh: Fresh | None = None) -> Formula:
    """Replace every ``P_sigma(args)`` by ``sigma(args)``: valid when the args are F-valued."""
    if isinstance(phi, Pred):
        return subst(phi.sigma, dict(zip(phi.params, phi.args)), fresh)
    if isinstance(phi, Not):
        return Not(inline_preds(phi.arg, fresh))
    if isinstance(phi, And):
        return And(tuple(inline_preds(a, fresh) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(inline_preds(a, fresh) for a in phi.args))
    if isinstance(phi, Implies):
        return Implies(inline_preds(phi.lhs, fresh), inline_preds(phi.rhs, fresh))
    if isinstance(phi, (Exists, Forall)):
        return type(phi)(phi.var, inline_preds(phi.body, fresh))
    return phi


def package(parts, gammas, fresh: Fresh | None = None) -> Formula:
    """``exists gammas (parts)`` over F as a single ``P_tau`` atom."""
    body = conj(*(inline_preds(a, fresh) for a in parts))
    tau = exists(list(gammas), body)
    if tau in (TRUE, FALSE):
        return tau
    params = tuple(sorted(free_vars(tau), key=lambda v: v.name))
    check_lp(tau, params)
    return Pred(tau, params, tuple(TVar(v) for v in params))


# ---------------------------------------------------------------------------
# prenex form

def standardize_apart(phi: Formula, fresh: Fresh) -> Formula:
    """Rename bound variables so that no name is bound twice or also free."""
    seen = set(free_vars(phi))

    def go(f):
        if isinstance(f, (Exists, Forall)):
            var, body = f.var, f.body
            if var in seen:
                new = fresh.var(var.name, var.sort)
                body = subst(body, {var: TVar(new)}, fresh)
                var = new
            seen.add(var)
            return type(f)(var, go(body))
        if isinstance(f, Not):
            return Not(go(f.arg))
        if isinstance(f, And):
            return And(tuple(go(a) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(go(a) for a in f.args))
        if isinstance(f, Implies):
            return Implies(go(f.lhs), go(f.rhs))
        return f

    return go(phi)


def _merge_prefixes(prefixes):
    """Interleave quantifier prefixes, taking maximal same-kind runs to keep alternations low."""
    lists = [list(p) for p in prefixes if p]
    out, cur = [], None
    while lists:
        heads = {l[0][0] for l in lists}
        if cur not in heads:
            cur = Forall if Forall in heads and len(heads) == 1 else lists[0][0][0]
        for l in lists:
            while l and l[0][0] is cur:
                out.append(l.pop(0))
        lists = [l for l in lists if l]
    return out


def prenex(phi: Formula, fresh: Fresh | None = None):
    """Return ``(prefix, matrix)``: prefix is a list of ``(Exists|Forall, var)``."""
    fresh = fresh or Fresh(all_vars(phi))
    phi = standardize_apart(nnf(phi), fresh)

    def pull(f):
        if isinstance(f, (Exists, Forall)):
            pre, m = pull(f.body)
            return [(type(f), f.var)] + pre, m
        if isinstance(f, (And, Or)):
            parts = [pull(a) for a in f.args]
            pre = _merge_prefixes([p for p, _ in parts])
            mats = [m for _, m in parts]
            return pre, (conj(*mats) if isinstance(f, And) else disj(*mats))
        return [], f

    return pull(phi)


def blocks(prefix):
    """Group a prefix into maximal ``(kind, [vars])`` blocks."""
    out = []
    for kind, v in prefix:
        if out and out[-1][0] is kind:
            out[-1][1].append(v)
        else:
            out.append((kind, [v]))
    return out


def from_prefix(prefix, matrix: Formula) -> Formula:
    for kind, v in reversed(list(prefix)):
        matrix = kind(v, matrix)
    return matrix


def prenex_formula(phi: Formula, fresh: Fresh | None = None) -> Formula:
    return from_prefix(*prenex(phi, fresh))


# ---------------------------------------------------------------------------
# negated membership in F

def eliminate_negations(phi: Formula, L: Localization, fresh: Fresh | None = None) -> Formula:
    """NNF without negated ``inF`` atoms and with ``inF`` applied to variables only.

    ``x not in F`` becomes ``exists y, a (x = y*Q + sum_{i<d} a_i z^i and (y != 0 or a_1 != 0 or ...))``
    for an irreducible Q of degree d not in S.
    """
    fresh = fresh or Fresh(all_vars(phi))
    spec = L.spec
    Q = None

    def go(f):
        nonlocal Q
        if isinstance(f, InF):
            if isinstance(f.arg, TVar):
                return f
            a = fresh.var("a", F_SORT)
            return Exists(a, Eq(f.arg, TVar(a)))
        if isinstance(f, Not) and isinstance(f.arg, InF):
            if Q is None:
                Q = aux_irreducible(L)
            y = fresh.var("y", R_SORT)
            al = [fresh.var("a", F_SORT) for _ in range(Q.deg)]
            rhs = Lin.var(spec, y, 0, Q) + poly_in(L, al)
            body = conj(
                eq0(lin(f.arg.arg, spec) - rhs),
                disj(neq0(Lin.var(spec, y)), *(neq0(Lin.var(spec, a)) for a in al[1:])),
            )
            return exists([y] + al, body)
        if isinstance(f, And):
            return conj(*(go(a) for a in f.args))
        if isinstance(f, Or):
            return disj(*(go(a) for a in f.args))
        if isinstance(f, (Exists, Forall)):
            return type(f)(f.var, go(f.body))
        return f

    return go(nnf(phi))


# ---------------------------------------------------------------------------
# bounded height

def bounded_height_formula(k: int, x: Var, L: Localization, fresh: Fresh | None = None, loose: bool = False):
    """Formula in x defining ``{x in R : |x| <= k} or {0}``.

    The exact form is a disjunction over the monic divisors B of degree <= k
    built from S: ``B*x = sum_{i<=k} a_i z^i``.  ``loose=True`` gives the single
    equation ``e^k x = sum_{i<=k(1+deg e)} a_i z^i``, which defines a larger set.
    """
    fresh = fresh or Fresh([x])
    spec = L.spec
    e = reduce(lambda a, b: a * b, [_fp(s, L) for s in L.S], Poly.one(_base(L)))
    if loose:
        D = k * (1 + e.deg)
        al = [fresh.var("a", F_SORT) for _ in range(D + 1)]
        return exists(al, eq0(Lin.var(spec, x, 0, e ** k) - poly_in(L, al)))
    al = [fresh.var("a", F_SORT) for _ in range(k + 1)]
    dens = _denominators(L, k)
    return exists(al, disj(*(eq0(Lin.var(spec, x, 0, B) - poly_in(L, al)) for B in dens)))


def _denominators(L: Localization, k: int):
    out = [Poly.one(_base(L))]
    for B in out:
        for s in L.S:
            c = B * _fp(s, L)
            if c.deg <= k and c not in out:
                out.append(c)
    return out


# ---------------------------------------------------------------------------
# existential normal form

@dataclass
class ENFDisjunct:
    """``exists x, alpha (f(x) + H(alpha) = u and_j e_j(x) + G_j(alpha) != v_j and preds)``."""

    xvars: tuple
    alphas: tuple
    f: AdditivePoly
    H: AdditivePoly
    u: Lin
    ineqs: tuple
    preds: tuple
    spec: object = None

    def bound(self):
        return set(self.xvars) | set(self.alphas)

    def equation(self) -> Formula:
        return eq0(Lin(self.f + self.H) - self.u)

    def matrix(self) -> Formula:
        parts = [self.equation()]
        parts += [neq0(Lin(e + G) - v) for e, G, v in self.ineqs]
        parts += list(self.preds)
        return conj(*parts)

    def to_formula(self) -> Formula:
        return exists(list(self.xvars) + list(self.alphas), self.matrix())

    def check_shape(self):
        bound = self.bound()
        if self.u.vars() & bound or any(v.vars() & bound for _, _, v in self.ineqs):
            raise ShapeError("bound variables may not occur in u or v_j")
        if any(v.sort != R_SORT for v in self.f.coeffs) or any(v.sort != F_SORT for v in self.H.coeffs):
            raise ShapeError("f takes R-variables and H takes F-variables")


def _dnf(phi: Formula, cap: int):
    if isinstance(phi, And):
        out = [[]]
        for a in phi.args:
            out = [c + d for c in out for d in _dnf(a, cap)]
            if len(out) > cap:
                raise ResourceLimitError(f"disjunctive normal form exceeds {cap} clauses")
        return out
    if isinstance(phi, Or):
        out = []
        for a in phi.args:
            out += _dnf(a, cap)
        if len(out) > cap:
            raise ResourceLimitError(f"disjunctive normal form exceeds {cap} clauses")
        return out
    if isinstance(phi, (Exists, Forall, Implies)):
        raise ShapeError("matrix is not quantifier-free NNF")
    return [[phi]]


def merge_equations(eqs, L: Localization) -> Lin | None:
    """One linear form vanishing exactly when all given ones do: ``L1^p + z L2^p``."""
    if not eqs:
        return None
    acc = eqs[0]
    for e in eqs[1:]:
        acc = acc.frobenius(1) + e.frobenius(1).scale(_z(L))
    return acc


def _clause_to_disjunct(clause, bound, L: Localization, fresh: Fresh) -> ENFDisjunct:
    spec = L.spec
    bound = list(bound)
    ren = {}
    extra_eqs = []
    lits = []
    for a in clause:
        if isinstance(a, InF):
            if not isinstance(a.arg, TVar):
                raise ShapeError("inF on a non-variable survived negation elimination")
            v = a.arg.var
            if v.sort == F_SORT:
                continue
            if v in bound:
                if v not in ren:
                    ren[v] = fresh.var("a", F_SORT)
                continue
            al = fresh.var("a", F_SORT)
            bound.append(al)
            extra_eqs.append(Lin.var(spec, v) - Lin.var(spec, al))
            continue
        lits.append(a)
    if ren:
        lits = [subst(a, {k: TVar(v) for k, v in ren.items()}) for a in lits]
        bound = [ren.get(v, v) for v in bound]
    eqs, nes, preds = list(extra_eqs), [], []
    for a in lits:
        if isinstance(a, Eq):
            eqs.append(lin(a.lhs, spec) - lin(a.rhs, spec))
        elif isinstance(a, Not) and isinstance(a.arg, Eq):
            nes.append(lin(a.arg.lhs, spec) - lin(a.arg.rhs, spec))
        elif isinstance(a, Pred):
            preds.append(a)
        elif isinstance(a, Not) and isinstance(a.arg, Pred):
            p = a.arg
            preds.append(Pred(neg(p.sigma), p.params, p.args))
        else:
            raise ShapeError(f"unexpected literal {a!r}")
    used = set()
    for Ln in eqs + nes:
        used |= Ln.vars()
    for p in preds:
        used |= free_vars(p)
    xvars = tuple(v for v in bound if v in used and v.sort == R_SORT)
    alphas = tuple(v for v in bound if v in used and v.sort == F_SORT)
    bset = set(xvars) | set(alphas)
    E = merge_equations(eqs, L) or Lin.zero(spec)
    f = E.restrict(xvars).with_vars(xvars)
    H = E.restrict(alphas).with_vars(alphas)
    u = -E.drop(bset)
    ineqs = tuple((Ln.restrict(xvars).with_vars(xvars), Ln.restrict(alphas).with_vars(alphas), -Ln.drop(bset)) for Ln in nes)
    d = ENFDisjunct(xvars, alphas, f, H, u, ineqs, tuple(preds), spec)
    d.check_shape()
    return d


def to_existential_normal_form(phi: Formula, L: Localization, fresh: Fresh | None = None, cap: int = 4096):
    """List of disjuncts whose disjunction is equivalent to the existential formula phi."""
    fresh = fresh or Fresh(all_vars(phi))
    psi = eliminate_negations(phi, L, fresh)
    prefix, matrix = prenex(psi, fresh)
    if any(kind is Forall for kind, _ in prefix):
        raise ShapeError("formula is not existential")
    bound = [v for _, v in prefix]
    return [_clause_to_disjunct(c, bound, L, fresh) for c in _dnf(matrix, cap)]


def enf_formula(disjuncts) -> Formula:
    return disj(*(d.to_formula() for d in disjuncts))


# ---------------------------------------------------------------------------
# normalizing the equation of a disjunct

@dataclass
class NormalizedDisjunct:
    disjunct: ENFDisjunct
    xi: object = None
    renaming: dict = field(default_factory=dict)

    def pull_back(self, xvals: dict) -> dict:
        """Values of the original x from values of the new R- and F-variables."""
        if self.xi is None:
            return dict(xvals)
        back = {v: k for k, v in self.renaming.items()}
        env = {back.get(k, k): v for k, v in xvals.items()}
        rv = [env[v] for v in self.xi.rvars]
        fv = [env[v] for v in self.xi.fvars]
        return dict(zip(self.xi.targets, self.xi.apply(rv, fv)))


def normalize_disjunct(d: ENFDisjunct, L: Localization, fresh: Fresh) -> NormalizedDisjunct:
    """Substitute a proper transformation for x so that the R-part of the equation is strongly normalized."""
    if not d.f.coeffs:
        return NormalizedDisjunct(d)
    res = normalize_full(d.f, L)
    xi = res.xi
    ren = {v: fresh.var("y" if v.sort == R_SORT else "d", v.sort) for v in xi.rvars + xi.fvars}
    comps = {t: Lin(c.rename(ren)) for t, c in zip(xi.targets, xi.components)}
    xvars = tuple(ren[v] for v in xi.rvars)
    new_f = tuple(ren[v] for v in xi.fvars)
    alphas = tuple(d.alphas) + new_f
    f = res.f_tilde.rename(ren).restrict(xvars).with_vars(xvars)
    H = (d.H + res.G.rename(ren)).with_vars(alphas)
    ineqs = []
    for e, G, v in d.ineqs:
        s = Lin(e).substitute(comps)
        ineqs.append((s.restrict(xvars).with_vars(xvars), (G + s.restrict(new_f)).with_vars(alphas), v))
    nd = ENFDisjunct(xvars, alphas, f, H, d.u, tuple(ineqs), d.preds, d.spec)
    nd.check_shape()
    return NormalizedDisjunct(nd, xi, ren)


# ---------------------------------------------------------------------------
# replacing bounded R-variables by F-variables

@dataclass
class Bounding:
    """R-variables of bounded height written as ``A_v / D`` with ``A_v = sum_{i<=top} a_{v,i} z^i``."""

    D: Poly
    top: int
    numerators: dict
    fvars: tuple

    def substitute(self, Ln: Lin) -> Lin:
        """``D^E * Ln`` with the bounded variables replaced, E the largest exponent among them."""
        b = [v for v in Ln.vars() if v in self.numerators]
        if not b:
            return Ln
        p = Ln.spec.p
        E = max(p ** k for v in b for k, c in enumerate(Ln.poly.coeffs[v]) if not c.is_zero())
        out = Ln.drop(b).scale(self.D ** E)
        for v in b:
            for k, c in enumerate(Ln.poly.coeffs[v]):
                if not c.is_zero():
                    out = out + self.numerators[v].frobenius(k).scale(c * self.D ** (E - p ** k))
        return out


def bounding_for(f: AdditivePoly, ell: int, L: Localization, fresh: Fresh, stem: str = "c") -> Bounding:
    """Numerators and common denominator covering every x with ``|f(x)| <= ell``."""
    vars = [v for v in f.rvars() if v in f.coeffs]
    hb = height_bound(f.restrict(vars), ell, L, allow_extension=True)
    D = Poly.one(_base(L))
    for Q, c in hb.C_places.items():
        D = D * _fp(Q, L) ** max(0, -c)
    top = D.deg + max(0, -hb.C_inf)
    nums, fv = {}, []
    for v in vars:
        al = [fresh.var(stem, F_SORT) for _ in range(top + 1)]
        fv += al
        nums[v] = poly_in(L, al)
    return Bounding(D, top, nums, tuple(fv))


def _coeff_deg(A: AdditivePoly) -> int:
    return max([c.deg for cs in A.coeffs.values() for c in cs if not c.is_zero()], default=0)


# ---------------------------------------------------------------------------
# universalization

@dataclass
class BoundedExistential:
    """``exists gammas (and_j atom_j and lp)``; each atom ``(Lin, kind)`` means ``Lin = 0`` or ``Lin != 0``.

    F-variables are arbitrary; the R-variables of an atom are free.
    """

    gammas: tuple
    atoms: tuple
    lp: tuple = ()

    def to_formula(self) -> Formula:
        parts = [eq0(a) if k == "eq" else neq0(a) for a, k in self.atoms]
        return exists(list(self.gammas), conj(*parts, *self.lp))


def universalize_bounded(pi: BoundedExistential, L: Localization, fresh: Fresh) -> Formula:
    """Universal formula equivalent in R to the bounded existential pi.

    Every atom whose R-part v_j is nontrivial is split through
    ``v_j = t_j + Q^(M+1) y_j`` with ``t_j = sum_{i<=M} mu_{j,i} Q^i`` (digits of
    degree < deg Q); the F-part G_j has z-degree <= M, so ``G_j != v_j`` iff
    ``y_j != 0`` or ``G_j != t_j``.
    """
    spec = L.spec
    direct, lifted = [], []
    for a, k in pi.atoms:
        rv = [v for v in a.vars() if v.sort == R_SORT]
        if not rv:
            direct.append(_lp_atom(a, k))
            continue
        G = a.drop(rv)
        v = -Lin(a.restrict(rv))
        lifted.append((G, v, k))
    base_parts = direct + list(pi.lp)
    if not lifted:
        return package(base_parts, pi.gammas, fresh)
    Q = aux_irreducible(L)
    d = Q.deg
    M = max(max(_coeff_deg(G.poly), G.const.deg, 0) for G, _, _ in lifted)
    ante, ys, mus, ts = [], [], [], []
    QM = Q ** (M + 1)
    for G, v, _ in lifted:
        mu = [fresh.var("mu", F_SORT) for _ in range((M + 1) * d)]
        t = Lin.zero(spec)
        for i in range(M + 1):
            t = t + poly_in(L, mu[i * d:(i + 1) * d]).scale(Q ** i)
        y = fresh.var("y", R_SORT)
        ante.append(eq0(v - t - Lin.var(spec, y, 0, QM)))
        mus += mu
        ys.append(y)
        ts.append(t)
    J = [j for j, (_, _, k) in enumerate(lifted) if k == "ne"]
    branches = []
    for r in range(len(J) + 1):
        for K in itertools.combinations(J, r):
            parts = [neq0(Lin.var(spec, ys[j])) for j in K]
            parts += [eq0(Lin.var(spec, ys[j])) for j in range(len(lifted)) if j not in K]
            inner = list(base_parts)
            for j, (G, _, k) in enumerate(lifted):
                if j not in K:
                    inner.append(_lp_atom(G - ts[j], k))
            parts.append(package(inner, pi.gammas, fresh))
            branches.append(conj(*parts))
    return forall(mus + ys, Implies(conj(*ante), disj(*branches)))


# ---------------------------------------------------------------------------
# membership in Im(f) + Im_F(H)

def _copies(vars, stem_r, stem_f, fresh: Fresh) -> dict:
    return {v: fresh.var(stem_r if v.sort == R_SORT else stem_f, v.sort) for v in vars}


@dataclass
class Logic1Result:
    """``forall x_, y, gamma (e^N u = e^N (f(x_) + h(y)) + G(gamma) -> pi1)``."""

    phi1: Formula
    pi1: Formula
    antecedent: Formula
    f: AdditivePoly
    h: AdditivePoly
    G: AdditivePoly
    H: AdditivePoly
    e: Poly
    N: int
    u: Lin
    xs: dict
    ws: dict
    alphas: dict
    ys: tuple
    gammas: tuple
    forward: Callable
    backward: Callable

    def pi1_matrix(self) -> Formula:
        """The equation of pi1 with w and alpha free."""
        eN = self.e ** self.N
        fw = Lin(self.f.rename(self.ws) + self.h).scale(eN)
        return eq0(fw + Lin(self.G) - Lin(self.H.rename(self.alphas)).scale(eN))


def logic1_transform(f: AdditivePoly, H: AdditivePoly, u: Lin, L: Localization, fresh: Fresh,
                     h: AdditivePoly | None = None, term=None) -> Logic1Result:
    """Universal-over-existential form of ``u in Im(f) + Im_F(H)`` for strongly normalized f.

    h completes f to a p-basic polynomial and ``(1/e^N) G`` is the bounded
    term for ``f + h``, so ``R = Im(f) + Im(h) + Im_F(G/e^N)``.
    """
    if not f.coeffs:
        raise ShapeError("f must be nonzero")
    f = f.restrict([v for v in f.vars if v in f.coeffs])
    if h is None:
        h0 = p_basic_completion(f)
        h = h0.rename(_copies(h0.vars, "yv", "yv", fresh))
    if term is None:
        term = bounded_term_for(f + h, L)
    G0 = term.G
    gren = _copies(G0.vars, "g", "g", fresh)
    G = G0.rename(gren)
    e = _fp(term.e, L)
    N = term.N
    eN = e ** N
    xvars = [v for v in f.vars]
    xs = _copies(xvars, "xl", "xl", fresh)
    ws = _copies(xvars, "w", "w", fresh)
    alphas = _copies(H.vars, "al", "al", fresh)
    ys = tuple(h.vars)
    gammas = tuple(G.vars)
    ante = eq0(u.scale(eN) - Lin(f.rename(xs) + h).scale(eN) - Lin(G))
    pi1_m = eq0(Lin(f.rename(ws) + h).scale(eN) + Lin(G) - Lin(H.rename(alphas)).scale(eN))
    pi1 = exists(list(ws.values()) + list(alphas.values()), pi1_m)
    phi1 = forall(list(xs.values()) + list(ys) + list(gammas), Implies(ante, pi1))

    def forward(x_tilde: dict, x_under: dict) -> dict:
        """From u = f(x~) + H(a~): w~ = x_ - x~ witnesses pi1."""
        return {ws[v]: x_under[xs[v]] - x_tilde[v] for v in xvars}

    def backward(x_under: dict, w_tilde: dict) -> dict:
        """From a pi1 witness w~: x~ = x_ - w~ puts u in Im(f) + Im_F(H)."""
        return {v: x_under[xs[v]] - w_tilde[ws[v]] for v in xvars}

    return Logic1Result(phi1, pi1, ante, f, h, G, H, e, N, u, xs, ws, alphas, ys, gammas, forward, backward)


def pi1_bounded(l1: Logic1Result, L: Localization, fresh: Fresh) -> BoundedExistential:
    """pi1 with w and y of bounded height, hence as a bounded existential in y and gamma."""
    spec = L.spec
    Fp = l1.f.rename(l1.ws) + l1.h
    eNdeg = l1.N * l1.e.deg
    ell = max(eNdeg + _coeff_deg(l1.H), _coeff_deg(l1.G), eNdeg)
    B = bounding_for(Fp, ell, L, fresh)
    m = l1.pi1_matrix()
    eq = lin(m.lhs, spec) - lin(m.rhs, spec)
    atoms = [(B.substitute(eq), "eq")]
    for y in l1.ys:
        atoms.append((Lin.var(spec, y, 0, B.D) - B.numerators[y], "eq"))
    gammas = tuple(l1.alphas.values()) + B.fvars
    return BoundedExistential(gammas, tuple(atoms))


def membership_universal(f: AdditivePoly, H: AdditivePoly, u: Lin, L: Localization, fresh: Fresh) -> Formula:
    """Universal formula for ``u in Im(f) + Im_F(H)``."""
    spec = L.spec
    if not f.coeffs:
        al = _copies(H.vars, "al", "al", fresh)
        pi = BoundedExistential(tuple(al.values()), ((Lin(H.rename(al)) - u, "eq"),))
        return universalize_bounded(pi, L, fresh)
    l1 = logic1_transform(f, H, u, L, fresh)
    chi1 = universalize_bounded(pi1_bounded(l1, L, fresh), L, fresh)
    return forall(list(l1.xs.values()) + list(l1.ys) + list(l1.gammas), Implies(l1.antecedent, chi1))


# ---------------------------------------------------------------------------
# one disjunct as membership plus a universal condition

@dataclass
class Logic2Result:
    """``(u in Im f + Im_F H) and forall w, beta (f(w) + H(beta) = u -> pi2)``."""

    phi2: Formula
    membership: Formula
    pi2: Formula
    antecedent: Formula
    disjunct: ENFDisjunct
    ws: dict
    betas: dict
    ts: dict
    gammas: dict
    forward: Callable
    backward: Callable

    def pi2_matrix(self) -> Formula:
        return _pi2_matrix(self.disjunct, self.ws, self.betas, self.ts, self.gammas)


def _pi2_matrix(d: ENFDisjunct, ws, betas, ts, gammas) -> Formula:
    spec = d.f.spec
    parts = [eq0(Lin(d.f.rename(ts) + d.H.rename(gammas)))]
    for e, G, v in d.ineqs:
        lhs = Lin(e.rename(ts) + G.rename(gammas))
        rhs = v - Lin(e.rename(ws)) - Lin(G.rename(betas))
        parts.append(neq0(lhs - rhs))
    shift = {a: TAdd((TVar(betas[a]), TVar(gammas[a]))) for a in d.alphas}
    for p in d.preds:
        parts.append(Pred(p.sigma, p.params, tuple(_subst_term(t, shift) for t in p.args)))
    return conj(*parts)


def _subst_term(t, mapping):
    from .ast import subst_term
    return subst_term(t, mapping)


def logic2_transform(d: ENFDisjunct, L: Localization, fresh: Fresh) -> Logic2Result:
    d.check_shape()
    spec = L.spec
    ws = _copies(d.xvars, "w", "w", fresh)
    betas = _copies(d.alphas, "b", "b", fresh)
    ts = _copies(d.xvars, "t", "t", fresh)
    gammas = _copies(d.alphas, "g", "g", fresh)
    xm = _copies(d.xvars, "xm", "xm", fresh)
    am = _copies(d.alphas, "am", "am", fresh)
    membership = exists(list(xm.values()) + list(am.values()),
                        eq0(Lin(d.f.rename(xm) + d.H.rename(am)) - d.u))
    pi2 = exists(list(ts.values()) + list(gammas.values()), _pi2_matrix(d, ws, betas, ts, gammas))
    ante = eq0(Lin(d.f.rename(ws) + d.H.rename(betas)) - d.u)
    phi2 = conj(membership, forall(list(ws.values()) + list(betas.values()), Implies(ante, pi2)))

    def forward(x_tilde: dict, a_tilde: dict, w_tilde: dict, b_tilde: dict) -> dict:
        """From a witness (x~, a~) of the disjunct: t~ = x~ - w~, g~ = a~ - b~."""
        out = {ts[v]: x_tilde[v] - w_tilde[ws[v]] for v in d.xvars}
        out.update({gammas[a]: a_tilde[a] - b_tilde[betas[a]] for a in d.alphas})
        return out

    def backward(w_tilde: dict, b_tilde: dict, t_tilde: dict, g_tilde: dict) -> dict:
        """From a pi2 witness: x~ = w~ + t~, a~ = b~ + g~."""
        out = {v: w_tilde[ws[v]] + t_tilde[ts[v]] for v in d.xvars}
        out.update({a: b_tilde[betas[a]] + g_tilde[gammas[a]] for a in d.alphas})
        return out

    return Logic2Result(phi2, membership, pi2, ante, d, ws, betas, ts, gammas, forward, backward)


def pi2_bounded(l2: Logic2Result, L: Localization, fresh: Fresh) -> BoundedExistential:
    """pi2 with the t's of f bounded; inequalities moving a free t are dropped as satisfiable."""
    d = l2.disjunct
    spec = L.spec
    occ = [v for v in d.xvars if v in d.f.coeffs]
    free_t = {l2.ts[v] for v in d.xvars if v not in d.f.coeffs}
    B = None
    if occ:
        B = bounding_for(d.f.rename(l2.ts), _coeff_deg(d.H), L, fresh)
    sub = (lambda Ln: B.substitute(Ln)) if B else (lambda Ln: Ln)
    m = _pi2_matrix(d, l2.ws, l2.betas, l2.ts, l2.gammas)
    lits = m.args if isinstance(m, And) else (m,)
    atoms, lp = [], []
    for a in lits:
        if isinstance(a, Eq):
            atoms.append((sub(lin(a.lhs, spec) - lin(a.rhs, spec)), "eq"))
        elif isinstance(a, Not) and isinstance(a.arg, Eq):
            Ln = lin(a.arg.lhs, spec) - lin(a.arg.rhs, spec)
            if Ln.vars() & free_t:
                continue
            atoms.append((sub(Ln), "ne"))
        elif a != TRUE:
            lp.append(a)
    gammas = tuple(l2.gammas.values()) + (B.fvars if B else ())
    return BoundedExistential(gammas, tuple(atoms), tuple(lp))


# ---------------------------------------------------------------------------
# alternation elimination

def disjunct_universal(d: ENFDisjunct, L: Localization, fresh: Fresh) -> Formula:
    nd = normalize_disjunct(d, L, fresh).disjunct
    memb = membership_universal(nd.f, nd.H, nd.u, L, fresh)
    l2 = logic2_transform(nd, L, fresh)
    chi2 = universalize_bounded(pi2_bounded(l2, L, fresh), L, fresh)
    rest = forall(list(l2.ws.values()) + list(l2.betas.values()), Implies(l2.antecedent, chi2))
    return conj(memb, rest)


def exist_to_univ(phi: Formula, L: Localization, fresh: Fresh, cap: int = 4096) -> Formula:
    """Universal formula equivalent in R to the existential formula phi."""
    enf = to_existential_normal_form(phi, L, fresh, cap)
    return disj(*(disjunct_universal(d, L, fresh) for d in enf))


def _check_size(phi: Formula, cap: int):
    n = size(phi)
    if n > cap:
        raise ResourceLimitError(f"formula size {n} exceeds cap {cap}")


def _alternate(phi: Formula, L: Localization, fresh: Fresh, target, cap: int):
    """Rewrite innermost blocks until the prefix is a single block of kind ``target``."""
    psi = eliminate_negations(phi, L, fresh)
    prefix, matrix = prenex(psi, fresh)
    bl = blocks(prefix)
    while bl and not (len(bl) == 1 and bl[0][0] is target):
        kind, vars = bl.pop()
        if kind is Exists:
            U = exist_to_univ(exists(vars, matrix), L, fresh, cap)
        else:
            U = neg(exist_to_univ(exists(vars, nnf(neg(matrix))), L, fresh, cap))
        _check_size(U, cap * 64)
        pre, matrix = prenex(eliminate_negations(U, L, fresh), fresh)
        new_kind = Forall if kind is Exists else Exists
        if any(k is not new_kind for k, _ in pre):
            raise ShapeError("block rewrite produced a mixed prefix")
        new_vars = [v for _, v in pre]
        if bl and bl[-1][0] is new_kind:
            bl[-1][1].extend(new_vars)
        elif new_vars:
            bl.append((new_kind, new_vars))
    return bl, matrix


def model_complete_transform(phi: Formula, L: Localization, cap: int = 1 << 16) -> Formula:
    """Universal formula equivalent in R to phi (prenex, matrix in NNF)."""
    fresh = Fresh(all_vars(phi))
    bl, matrix = _alternate(phi, L, fresh, Forall, cap)
    if bl and bl[0][0] is Exists:
        raise ShapeError("could not reach a universal prefix")
    return forall(bl[0][1] if bl else [], matrix)


def to_existential(phi: Formula, L: Localization, cap: int = 1 << 16, fresh: Fresh | None = None) -> Formula:
    """Existential formula equivalent in R to phi."""
    fresh = fresh or Fresh(all_vars(phi))
    bl, matrix = _alternate(phi, L, fresh, Exists, cap)
    return exists(bl[0][1] if bl else [], matrix)


def _disjunct_sigma(d: ENFDisjunct, L: Localization, fresh: Fresh) -> Formula:
    """L_p sentence equivalent to a sentence disjunct whose f is strongly normalized."""
    spec = L.spec
    if d.u.vars() or any(v.vars() for _, _, v in d.ineqs):
        raise ShapeError("a sentence disjunct has no free variables")
    occ = [v for v in d.xvars if v in d.f.coeffs]
    free = set(d.xvars) - set(occ)
    B = None
    if occ:
        ell = max(d.u.const.deg, _coeff_deg(d.H), 0)
        B = bounding_for(d.f, ell, L, fresh)
    sub = (lambda Ln: B.substitute(Ln)) if B else (lambda Ln: Ln)
    parts = [_lp_atom(sub(Lin(d.f + d.H) - d.u), "eq")]
    for e, G, v in d.ineqs:
        if set(e.coeffs) & free:
            continue
        parts.append(_lp_atom(sub(Lin(e + G) - v), "ne"))
    parts += [inline_preds(p, fresh) for p in d.preds]
    fv = list(d.alphas) + (list(B.fvars) if B else [])
    return exists(fv, conj(*parts))


def sentence_to_sigma(phi: Formula, L: Localization, cap: int = 1 << 16) -> Formula:
    """An L_p sentence that holds in F exactly when the sentence phi holds in R."""
    if free_vars(phi):
        raise ShapeError("sentence_to_sigma needs a sentence")
    fresh = Fresh(all_vars(phi))
    psi = to_existential(phi, L, cap, fresh)
    out = []
    for d in to_existential_normal_form(psi, L, fresh, cap):
        nd = normalize_disjunct(d, L, fresh).disjunct
        out.append(_disjunct_sigma(nd, L, fresh))
    sigma = disj(*out)
    check_lp(sigma)
    return sigma


def as_bounded_existential(phi: Formula, L: Localization) -> BoundedExistential:
    """Read ``exists F-vars (conjunction of (in)equations and P atoms)``."""
    spec = L.spec
    gammas = []
    while isinstance(phi, Exists):
        if phi.var.sort != F_SORT:
            raise ShapeError("bounded existentials quantify F-variables only")
        gammas.append(phi.var)
        phi = phi.body
    lits = phi.args if isinstance(phi, And) else (phi,)
    atoms, lp = [], []
    for a in lits:
        if isinstance(a, Eq):
            atoms.append((lin(a.lhs, spec) - lin(a.rhs, spec), "eq"))
        elif isinstance(a, Not) and isinstance(a.arg, Eq):
            atoms.append((lin(a.arg.lhs, spec) - lin(a.arg.rhs, spec), "ne"))
        elif isinstance(a, Pred):
            lp.append(a)
        else:
            raise ShapeError(f"unexpected conjunct {a!r}")
    return BoundedExistential(tuple(gammas), tuple(atoms), tuple(lp))
