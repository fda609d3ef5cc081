"""Normalization of additive polynomials by proper transformations.

Three stages, each returning ``(xi, f_tilde, G)`` with ``f o xi = f_tilde + G``:

1. :func:`eliminate_dependence` until the leading family is p-free,
2. :func:`equalize_degrees` so every variable has degree ``p^s``,
3. :func:`strongly_normalize` so leading-coefficient degrees differ mod ``p^s``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .additive import (
    F_SORT,
    R_SORT,
    AdditivePoly,
    ProperTransformation,
    Var,
    classify,
    compose_additive,
    eval_additive,
    monomial,
    p_free_family,
)
from .independence import coordinates_in_w
from .linalg import rat_kernel
from .poly import Poly
from .ratfun import Localization, RatFunc, divide_with_remainder, q_power_decomposition


class NormalizationError(RuntimeError):
    """A stage failed its own postcondition."""


@dataclass
class NormalizationResult:
    xi: ProperTransformation
    f_tilde: AdditivePoly
    G: AdditivePoly
    steps: int = 0

    def identity_holds(self, f: AdditivePoly) -> bool:
        return symbolic_identity_holds(f, self)


def symbolic_identity_holds(f: AdditivePoly, res: NormalizationResult) -> bool:
    lhs = compose_additive(f, res.xi.as_subs())
    return lhs == res.f_tilde + res.G


class _Names:
    def __init__(self, used):
        self.used = {v.name for v in used}
        self.k = 0

    def fresh(self, stem, sort):
        while True:
            name = f"{stem}{self.k}"
            self.k += 1
            if name not in self.used:
                self.used.add(name)
                return Var(name, sort)

    def derived(self, base, idx, sort=R_SORT):
        name = f"{base}_{idx}"
        while name in self.used:
            name += "'"
        self.used.add(name)
        return Var(name, sort)


def _occurring(f):
    return [v for v in f.rvars() if v in f.coeffs]


def _degree_sum(f):
    return sum(f.p ** f.s(v) for v in _occurring(f))


def _split(f: AdditivePoly, rvars):
    """R-part restricted to occurring variables, and the F-part."""
    occ = [v for v in rvars if v in f.coeffs]
    return f.restrict(occ), f.f_part()


def _start(f: AdditivePoly, L: Localization | None):
    spec = f.spec
    if L is None:
        L = Localization(spec, ())
    rv = f.rvars()
    xi = ProperTransformation.identity(spec, rv)
    return L, xi, f.r_part().restrict(_occurring(f)), f.f_part()


def _dependence(f: AdditivePoly):
    """A relation ``sum c_{i,j}^q b_i z^(j p^(s_i)) = 0`` as {(var, j): c}, or None."""
    vars = _occurring(f)
    fam, labels, s = p_free_family(f, vars)
    cols = [coordinates_in_w(x, s) for x in fam]
    q = f.p ** s
    M = [[cols[e][i] for e in range(len(fam))] for i in range(q)]
    ker = rat_kernel(M)
    if not ker:
        return None, s
    vec = ker[0]
    base = f.base
    lcm = Poly.one(base)
    for x in vec:
        lcm = (lcm * x.den).exact_div(lcm.gcd(x.den))
    rel = {}
    for lab, x in zip(labels, vec):
        c = (x * RatFunc(lcm)).num
        if not c.is_zero():
            rel[lab] = c  # over F_p, K(w) -> K(z) is the q-th root
    return rel, s


def eliminate_dependence(f: AdditivePoly, L: Localization | None = None) -> NormalizationResult:
    """Remove dependences among the leading family until it is p-free."""
    spec = f.spec
    base = spec.prime_field()
    L, xi, cur, G = _start(f, L)
    names = _Names(f.vars)
    steps = 0
    while cur.coeffs:
        rel, s = _dependence(cur)
        if rel is None:
            break
        order = list(cur.rvars())
        support = sorted({v for v, _ in rel}, key=lambda v: (-cur.s(v), order.index(v)))
        x1 = support[0]
        s1 = cur.s(x1)
        c = Poly.zero(base)
        for mu in range(spec.p ** (s - s1)):
            cm = rel.get((x1, mu))
            if cm is not None:
                c = c + cm.subs_power(spec.p ** (s - s1)).shift(mu)
        ell = c.deg
        alphas = [names.fresh("al", F_SORT) for _ in range(ell)]
        targets = tuple(xi.rvars)
        comps = []
        for v in targets:
            if v == x1:
                comp = monomial(spec, x1, 0, c)
                for k, a in enumerate(alphas):
                    comp = comp + monomial(spec, a, 0, Poly.monomial(base, k))
            elif v in cur.coeffs and any(w == v for w, _ in rel):
                si = cur.s(v)
                t = Poly.zero(base)
                for j in range(spec.p ** (s - si)):
                    cij = rel.get((v, j))
                    if cij is not None:
                        t = t + cij.subs_power(spec.p ** (s - si)).shift(j)
                comp = monomial(spec, v) + monomial(spec, x1, s1 - si, t)
            else:
                comp = monomial(spec, v)
            comps.append(comp)
        step = ProperTransformation(
            spec, targets, targets, tuple(alphas), comps,
            _elim_witness(targets, x1, c, alphas, comps, L),
        )
        before = _degree_sum(cur)
        img = compose_additive(cur, step.as_subs())
        new_cur, new_G = _split(img, targets)
        if _degree_sum(new_cur) >= before:
            raise NormalizationError("degree sum did not decrease")
        xi = xi.then(step)
        cur = new_cur
        G = G + new_G
        steps += 1
    return NormalizationResult(xi, cur, G, steps)


def _elim_witness(targets, x1, c, alphas, comps, L):
    i1 = targets.index(x1)
    spec = L.spec

    def witness(target):
        t1 = target[i1]
        if c.deg < 1:
            y1 = t1 / RatFunc(c.change_field(spec))
            r = Poly.zero(spec)
        else:
            y1, r = divide_with_remainder(t1, c.change_field(spec), L)
        avals = [r.coeff(k) for k in range(len(alphas))]
        out = []
        for pos, v in enumerate(targets):
            if pos == i1:
                out.append(y1)
                continue
            # x_v = y_v + (terms in x1 only)
            rest = comps[pos].restrict([x1])
            out.append(target[pos] - eval_additive(rest, {x1: y1}) if not rest.is_zero() else target[pos])
        return tuple(out), tuple(avals)

    return witness


def equalize_degrees(f: AdditivePoly, L: Localization | None = None) -> NormalizationResult:
    """Raise every variable to degree ``p^s`` by splitting it along the basis ``z^k``."""
    spec = f.spec
    L, xi, cur, G = _start(f, L)
    names = _Names(f.vars)
    if not cur.coeffs:
        return NormalizationResult(xi, cur, G)
    s = max(cur.s(v) for v in cur.coeffs)
    targets = tuple(xi.rvars)
    new_vars, comps, plan = [], [], []
    for v in targets:
        si = cur.s(v) if v in cur.coeffs else s
        if si == s:
            new_vars.append(v)
            comps.append(monomial(spec, v))
            plan.append((v, 0, [v]))
            continue
        d = s - si
        parts = [names.derived(v.name, k) for k in range(spec.p ** d)]
        comp = AdditivePoly(spec, {}, [])
        for k, w in enumerate(parts):
            comp = comp + monomial(spec, w, d, Poly.monomial(spec.prime_field(), k))
        new_vars += parts
        comps.append(comp)
        plan.append((v, d, parts))

    def witness(target):
        out = []
        for (v, d, parts), t in zip(plan, target):
            if d == 0:
                out.append(t)
            else:
                out.extend(q_power_decomposition(t, d))
        return tuple(out), ()

    step = ProperTransformation(spec, targets, tuple(new_vars), (), comps, witness)
    img = compose_additive(cur, step.as_subs())
    new_cur, _ = _split(img, new_vars)
    return NormalizationResult(xi.then(step), new_cur, G, 1 if len(new_vars) != len(targets) else 0)


def _residue_clash(f: AdditivePoly, vars, q):
    """Pair (hi, lo) of variables whose leading degrees agree mod q, hi having the larger degree."""
    best = None
    for a in range(len(vars)):
        for b in range(a + 1, len(vars)):
            va, vb = vars[a], vars[b]
            da, db = f.lead(va).deg, f.lead(vb).deg
            if (da - db) % q:
                continue
            hi, lo = (va, vb) if da >= db else (vb, va)
            key = (-max(da, db), a, b)
            if best is None or key < best[0]:
                best = (key, hi, lo)
    return None if best is None else best[1:]


def strongly_normalize(f: AdditivePoly, L: Localization | None = None) -> NormalizationResult:
    """Cancel top terms of leading coefficients until their degrees differ mod ``p^s``."""
    spec = f.spec
    base = spec.prime_field()
    L, xi, cur, G = _start(f, L)
    if not cur.coeffs:
        return NormalizationResult(xi, cur, G)
    s = max(cur.s(v) for v in cur.coeffs)
    if any(cur.s(v) != s for v in cur.coeffs):
        raise NormalizationError("input is not normalized")
    q = spec.p ** s
    steps = 0
    while True:
        vars = _occurring(cur)
        clash = _residue_clash(cur, vars, q)
        if clash is None:
            break
        hi, lo = clash
        bh, bl = cur.lead(hi), cur.lead(lo)
        k = (bh.deg - bl.deg) // q
        lam = -(bh.lc / bl.lc)
        t = Poly.monomial(base, k, lam)
        targets = tuple(xi.rvars)
        comps = []
        for v in targets:
            if v == lo:
                comps.append(monomial(spec, lo) + monomial(spec, hi, 0, t))
            else:
                comps.append(monomial(spec, v))
        ilo, ihi = targets.index(lo), targets.index(hi)
        tt = t.change_field(spec)

        def witness(target, ilo=ilo, ihi=ihi, tt=tt):
            out = list(target)
            out[ilo] = target[ilo] - RatFunc(tt) * target[ihi]
            return tuple(out), ()

        step = ProperTransformation(spec, targets, targets, (), comps, witness)
        before = sum(cur.lead(v).deg for v in vars)
        img = compose_additive(cur, step.as_subs())
        new_cur, _ = _split(img, targets)
        if any(new_cur.s(v) != s for v in new_cur.coeffs) or sum(new_cur.lead(v).deg for v in _occurring(new_cur)) >= before:
            raise NormalizationError("leading degree measure did not decrease")
        xi = xi.then(step)
        cur = new_cur
        steps += 1
    return NormalizationResult(xi, cur, G, steps)


def p_basic_completion(f: AdditivePoly, stem: str = "v") -> AdditivePoly:
    """``h = sum_r z^r v_r^q`` over the residues mod q missing from the leading degrees."""
    spec = f.spec
    vars = _occurring(f)
    if not vars:
        raise ValueError("need at least one variable")
    s = max(f.s(v) for v in vars)
    q = spec.p ** s
    if len(vars) > q:
        raise ValueError("more variables than p^s")
    present = {f.lead(v).deg % q for v in vars}
    if len(present) != len(vars):
        raise ValueError("input is not strongly normalized")
    names = _Names(f.vars)
    h = AdditivePoly(spec, {}, [])
    for r in range(q):
        if r not in present:
            v = names.fresh(stem, R_SORT)
            h = h + monomial(spec, v, s, Poly.monomial(spec.prime_field(), r))
    return h


def normalize_full(f: AdditivePoly, L: Localization | None = None) -> NormalizationResult:
    """All three stages composed; F-variable parts accumulate in ``G``."""
    res = eliminate_dependence(f, L)
    for stage in (equalize_degrees, strongly_normalize):
        if not res.f_tilde.coeffs:
            break
        res = _chain(res, stage(res.f_tilde + res.G, L))
    if res.f_tilde.coeffs and not classify(res.f_tilde).strongly_normalized:
        raise NormalizationError("pipeline output is not strongly normalized")
    return res


def _chain(first: NormalizationResult, second: NormalizationResult) -> NormalizationResult:
    """Run ``second`` on the output of ``first``; variables left free by ``first`` pass through."""
    sx = second.xi
    missing = [v for v in first.xi.rvars if v not in sx.targets]
    if missing:
        sx = _product(sx, ProperTransformation.identity(sx.spec, missing))
    return NormalizationResult(first.xi.then(sx), second.f_tilde, second.G, first.steps + second.steps)


def _product(a: ProperTransformation, b: ProperTransformation) -> ProperTransformation:
    """Independent transformations side by side."""
    spec = a.spec
    na, nb = len(a.targets), len(b.targets)

    def witness(target):
        ra, fa = a._witness(tuple(target[:na]))
        rb, fb = b._witness(tuple(target[na:na + nb]))
        return tuple(ra) + tuple(rb), tuple(fa) + tuple(fb)

    return ProperTransformation(
        spec, a.targets + b.targets, a.rvars + b.rvars, a.fvars + b.fvars,
        list(a.components) + list(b.components), witness,
    )
