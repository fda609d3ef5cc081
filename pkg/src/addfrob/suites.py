"""Seeded property suites.  ``selftest`` runs them at reduced size, the test
suite at full size.  Every suite returns a :class:`SuiteResult` whose
``details`` are plain JSON-able values."""

from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .additive import AdditivePoly, classify, eval_additive, format_additive, fvar, parse_additive, rvar
from .bounds import (
    check_reduction_witness, falsification_scan, image_decomposition, inverse_image, reduce_mod_image,
)
from .gf import FieldElem, FieldSpec
from .hasse import check_p3, hasse_derivative, hasse_derivatives
from .independence import monomial_family, rank_oracle, wronskian_certificate
from .normalize import normalize_full
from .poly import Poly
from .ratfun import INFINITY, Localization, Place, RatFunc, ord_at

DEFAULT_SEED = 20240611

F2, F3, F4 = FieldSpec(2, 1), FieldSpec(3, 1), FieldSpec(2, 2)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    failures: int
    seconds: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {self.name}: checked={self.checked} failures={self.failures} time={self.seconds:.1f}s"

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "failures": self.failures, "details": self.details}


# ---------------------------------------------------------------------------
# generators

def rand_poly(rng: random.Random, spec: FieldSpec, deg: int, nonzero=False) -> Poly:
    while True:
        P = Poly(spec, [FieldElem(spec, rng.randrange(spec.order)) for _ in range(deg + 1)])
        if not nonzero or not P.is_zero():
            return P


def rand_fp_poly(rng: random.Random, spec: FieldSpec, deg: int, nonzero=False) -> Poly:
    return rand_poly(rng, spec.prime_field(), deg, nonzero)


def rand_ratfunc(rng: random.Random, spec: FieldSpec, max_deg: int = 8) -> RatFunc:
    num = rand_poly(rng, spec, rng.randint(0, max_deg))
    den = rand_poly(rng, spec, rng.randint(0, max_deg), nonzero=True)
    return RatFunc(num, den)


def rand_ring_elem(rng: random.Random, L: Localization, height: int) -> RatFunc:
    """Random element of R of height at most ``height``."""
    spec = L.spec
    while True:
        den = Poly.one(spec)
        for s in L.S:
            s = s.change_field(spec)
            k = rng.randint(0, height // max(1, s.deg * max(1, len(L.S))))
            den = den * s ** k
        if den.deg > height:
            continue
        x = RatFunc(rand_poly(rng, spec, rng.randint(0, height)), den)
        if x.is_zero() or max(x.num.deg, x.den.deg) <= height:
            return x


def rand_additive(rng: random.Random, spec: FieldSpec, nvars: int, max_s: int, max_cdeg: int) -> AdditivePoly:
    terms = {}
    vs = [rvar(f"x{i + 1}") for i in range(nvars)]
    for v in vs:
        s = rng.randint(0, max_s)
        cs = [rand_fp_poly(rng, spec, rng.randint(0, max_cdeg)) for _ in range(s)]
        cs.append(rand_fp_poly(rng, spec, rng.randint(0, max_cdeg), nonzero=True))
        terms[v] = cs
    return AdditivePoly(spec, terms, vs)


def rand_p_basic(rng: random.Random, spec: FieldSpec, s: int, max_cdeg: int = 3, lower: bool = True) -> AdditivePoly:
    q = spec.p ** s
    while True:
        vs = [rvar(f"x{i + 1}") for i in range(q)]
        terms = {}
        for v in vs:
            cs = [rand_fp_poly(rng, spec, rng.randint(0, 2)) if lower else Poly.zero(spec.prime_field())
                  for _ in range(s)]
            cs.append(rand_fp_poly(rng, spec, rng.randint(0, max_cdeg), nonzero=True))
            terms[v] = cs
        f = AdditivePoly(spec, terms, vs)
        if classify(f).p_basic:
            return f


def _timed(name, fn):
    t0 = time.perf_counter()
    checked, failures, details = fn()
    dt = time.perf_counter() - t0
    details["seconds"] = round(dt, 2)
    return SuiteResult(name, failures == 0 and details.pop("_ok", True), checked, failures, dt, details)


# ---------------------------------------------------------------------------
# 1. Hasse identities

def compositions(n: int, k: int):
    """Ordered tuples of k positive integers summing to n."""
    for cuts in itertools.combinations(range(1, n), k - 1):
        b = (0,) + cuts + (n,)
        yield tuple(b[i + 1] - b[i] for i in range(k))


def inverse_rule(f: RatFunc, eps: int) -> RatFunc:
    """D_eps(1/f) by the explicit sum over compositions of eps.

    Compositions sharing a multiset of parts give the same product, so each
    multiset is evaluated once and weighted by its count mod p.
    """
    spec = f.spec
    D = hasse_derivatives(f, eps)
    acc = RatFunc.zero(spec)
    for j in range(1, eps + 1):
        counts = Counter(tuple(sorted(c)) for c in compositions(eps, j))
        num, den = Poly.zero(spec), Poly.one(spec)
        for parts, k in counts.items():
            if k % spec.p == 0:
                continue
            tn, td = Poly.monomial(spec, 0, FieldElem(spec, k % spec.p)), Poly.one(spec)
            for i in parts:
                tn, td = tn * D[i].num, td * D[i].den
            num, den = num * td + tn * den, den * td
        if not num.is_zero():
            sign = FieldElem(spec, 1 if j % 2 == 0 else spec.p - 1)
            acc = acc + RatFunc(num * Poly.monomial(spec, 0, sign), den) / f ** (j + 1)
    return acc


def suite_hasse(n: int = 1000, seed: int = DEFAULT_SEED) -> SuiteResult:
    def run():
        rng = random.Random(seed)
        fails = {"P1": 0, "P2": 0, "P3": 0, "P4": 0}
        for _ in range(n):
            spec = rng.choice([F2, F3, F4])
            f, g = rand_ratfunc(rng, spec), rand_ratfunc(rng, spec)
            eps = rng.randint(0, 8)
            Df = [hasse_derivative(f, i) for i in range(eps + 1)]
            Dg = hasse_derivatives(g, eps)
            if hasse_derivative(f + g, eps) != Df[eps] + Dg[eps]:
                fails["P1"] += 1
            leib = RatFunc.zero(spec)
            for i in range(eps + 1):
                leib = leib + Df[i] * Dg[eps - i]
            if hasse_derivative(f * g, eps) != leib:
                fails["P2"] += 1
            m = rng.randint(1, 2) if spec.p == 2 else 1
            try:
                check_p3(f, m, eps)
            except ArithmeticError:
                fails["P3"] += 1
            if not f.is_zero() and eps and hasse_derivative(f.inverse(), eps) != inverse_rule(f, eps):
                fails["P4"] += 1
        return n, sum(fails.values()), {"per_identity": fails, "samples": n}

    return _timed("hasse_identities", run)


# ---------------------------------------------------------------------------
# 2. order inequality

def degree_one_places(spec: FieldSpec):
    return [Place(Poly(spec, [-FieldElem(spec, a), FieldElem(spec, 1)])) for a in range(spec.order)]


def suite_order(n: int = 1000, seed: int = DEFAULT_SEED, min_equalities: int = 10) -> SuiteResult:
    def run():
        rng = random.Random(seed + 1)
        bad, eq_cases, done = 0, [], 0
        while done < n:
            spec = rng.choice([F2, F3, F4])
            u = rand_ratfunc(rng, spec)
            if u.is_zero():
                continue
            eps = rng.randint(1, 8)
            v = rng.choice(degree_one_places(spec) + [INFINITY])
            D = hasse_derivative(u, eps)
            if D.is_zero():
                continue
            done += 1
            lhs, rhs = ord_at(D, v), ord_at(u, v) - eps
            if lhs < rhs:
                bad += 1
            elif lhs == rhs and len(eq_cases) < 50:
                eq_cases.append({"u": str(u), "eps": eps, "place": str(v), "ord": lhs})
        ok = len(eq_cases) >= min_equalities
        return done, bad, {"equality_cases": len(eq_cases), "examples": eq_cases[:10], "_ok": ok}

    return _timed("order_inequality", run)


# ---------------------------------------------------------------------------
# 3. Wronskian criterion

def suite_wronskian(n: int = 200, seed: int = DEFAULT_SEED, exhaustive: bool = True) -> SuiteResult:
    def run():
        rng = random.Random(seed + 2)
        bad, checked, independent = 0, 0, 0
        for _ in range(n):
            spec = rng.choice([F2, F3])
            s = rng.randint(1, 2) if spec.p == 2 else 1
            q = spec.p ** s
            k = rng.randint(1, q)
            fam = [rand_ratfunc(rng, spec, 4) for _ in range(k)]
            if rng.random() < 0.3 and k >= 2:
                # force a dependence over F(z^q)
                c = RatFunc(rand_poly(rng, spec, 2).subs_power(q))
                fam[-1] = fam[0] * c
            cert = wronskian_certificate(fam, s)
            r = rank_oracle(fam, s)
            checked += 1
            independent += r == k
            bad += (cert is not None) != (r == k)
        mono = 0
        if exhaustive:
            for s in (0, 1, 2):
                q = 2 ** s
                for k in range(1, q + 1):
                    for exps in itertools.combinations(range(7), k):
                        fam = monomial_family(F2, exps)
                        cert = wronskian_certificate(fam, s)
                        r = rank_oracle(fam, s)
                        mono += 1
                        bad += (cert is not None) != (r == k)
        return checked + mono, bad, {"random_families": checked, "independent": independent,
                                     "monomial_families": mono}

    return _timed("wronskian_criterion", run)


# ---------------------------------------------------------------------------
# 4. normalization

def suite_normalize(n: int = 200, seed: int = DEFAULT_SEED, targets: int = 20) -> SuiteResult:
    def run():
        rng = random.Random(seed + 3)
        fails = {"identity": 0, "strongly_normalized": 0, "degree": 0, "vars": 0, "preimage": 0}
        examples = []
        for _ in range(n):
            spec = rng.choice([F2, F3])
            f = rand_additive(rng, spec, rng.randint(1, 3), 2, 4)
            L = Localization(spec, rng.choice([[], ["z"]]))
            res = normalize_full(f, L)
            ft = res.f_tilde
            if not res.identity_holds(f):
                fails["identity"] += 1
            if ft.coeffs and not classify(ft).strongly_normalized:
                fails["strongly_normalized"] += 1
            if ft.degree() > f.degree():
                fails["degree"] += 1
            if len(ft.rvars()) > len(f.rvars()):
                fails["vars"] += 1
                if len(examples) < 5:
                    examples.append({"f": str(f), "f_tilde": str(ft)})
            for _ in range(targets):
                tgt = [rand_ring_elem(rng, L, 5) for _ in res.xi.targets]
                try:
                    r, a = res.xi.preimage(tgt, check=False)
                    ok = res.xi.apply(r, a) == tuple(tgt)
                except Exception:
                    ok = False
                fails["preimage"] += not ok
        return n, sum(fails.values()), {"per_check": fails, "vars_examples": examples}

    return _timed("normalization", run)


# ---------------------------------------------------------------------------
# 5. reduction

def _reduction_setup(rng):
    spec = rng.choice([F2, F4])
    S = rng.choice([["z"], ["z", "z+1"]])
    L = Localization(spec, S)
    s = rng.choice([1, 2])
    f = rand_p_basic(rng, spec, s, max_cdeg=2 * s - 1)
    return spec, L, f


def suite_reduction(n: int = 200, seed: int = DEFAULT_SEED) -> SuiteResult:
    def run():
        rng = random.Random(seed + 4)
        bad, progress_bad, steps = 0, 0, 0
        examples = []
        for _ in range(n):
            spec, L, f = _reduction_setup(rng)
            u = rand_ring_elem(rng, L, 12)
            try:
                w = reduce_mod_image(f, u, L)
                v = check_reduction_witness(f, w, L)
            except Exception as ex:  # noqa: BLE001 - recorded as a violation
                v = [repr(ex)]
                w = None
            if w is not None:
                for _, before, after in w.progress:
                    steps += 1
                    progress_bad += not (after < before)
            if v:
                bad += 1
                if len(examples) < 5:
                    examples.append({"f": str(f), "u": str(u), "violations": v})
        return n, bad + progress_bad, {"witness_violations": bad, "progress_violations": progress_bad,
                                       "iterations": steps, "examples": examples}

    return _timed("reduction", run)


# ---------------------------------------------------------------------------
# 6. image decomposition

def suite_image(n: int = 100, seed: int = DEFAULT_SEED) -> SuiteResult:
    def run():
        rng = random.Random(seed + 5)
        bad = 0
        for _ in range(n):
            spec, L, f = _reduction_setup(rng)
            u = rand_ring_elem(rng, L, 12)
            try:
                dec = image_decomposition(f, u, L)
                bad += dec.recombine(f) != u
            except Exception:  # noqa: BLE001
                bad += 1
        return n, bad, {}

    return _timed("image_decomposition", run)


# ---------------------------------------------------------------------------
# 7. height bound falsification

def suite_height(seed: int = DEFAULT_SEED, margin: int = 2, with_lower: bool = True) -> SuiteResult:
    def run():
        L = Localization(F2, ["z"])
        polys = ["x1^2 + poly{z}*x2^2"]
        if with_lower:
            polys.append("x1^2 + poly{z}*x2^2 + x1")
        reports, bad, checked = [], 0, 0
        for text in polys:
            f = parse_additive(text, F2)
            rep = falsification_scan(f, 3, L, margin=margin, cap=1 << 16)
            checked += rep.pairs
            bad += len(rep.violations)
            reports.append({"f": text, "h": rep.h, "pole_order": rep.K, "max_num_deg": rep.max_num_deg,
                            "pairs": rep.pairs, "survivors": rep.survivors, "max_height": rep.max_height,
                            "violations": [[str(t) for t in x] for x in rep.violations[:5]]})
        return checked, bad, {"scans": reports}

    return _timed("height_bound", run)


# ---------------------------------------------------------------------------
# 8. logic witness maps

def _consts(spec, elems):
    return [RatFunc.const(spec, a) for a in elems]


def _rand_H(rng, spec, k):
    al = [fvar(f"a{i + 1}") for i in range(k)]
    terms = {a: [rand_fp_poly(rng, spec, rng.randint(0, 2), nonzero=(j == 0)) for j in range(rng.randint(1, 2))]
             for a in al}
    return AdditivePoly(spec, terms, al)


def _rand_F(rng, spec):
    return RatFunc.const(spec, FieldElem(spec, rng.randrange(spec.order)))


def suite_witness(n: int = 50, seed: int = DEFAULT_SEED) -> SuiteResult:
    from .logic.ast import Fresh, Lin, Pred, TVar
    from .logic.semantics import BoundedEvaluator
    from .logic.syntax import parse_sigma
    from .logic.transform import ENFDisjunct, logic1_transform, logic2_transform

    def holds(ev, phi, env):
        return ev.holds(phi, env)

    def run():
        rng = random.Random(seed + 7)
        spec = F2
        L = Localization(spec, ["z"])
        ev = BoundedEvaluator(L, cap=0)
        u = rvar("u")
        counts = {"logic1_forward": 0, "logic1_backward": 0, "logic2_forward": 0, "logic2_backward": 0}
        bad = dict.fromkeys(counts, 0)
        examples = []
        fam = ["x1^2 + poly{z}*x2^2", "x1^2", "poly{z}*x1^2 + x1", "x1^2 + poly{z}*x2^2 + poly{z+1}*x2",
               "poly{z^2+1}*x1^2 + poly{z}*x2^2"]

        # logic1
        while counts["logic1_forward"] < n:
            f = parse_additive(rng.choice(fam), spec)
            H = _rand_H(rng, spec, rng.randint(1, 2))
            fresh = Fresh(set(f.vars) | set(H.vars) | {u})
            l1 = logic1_transform(f, H, Lin.var(spec, u), L, fresh)
            fh = l1.f + l1.h
            xv = l1.f.rvars()
            # forward: planted u = f(x~) + H(a~); x_, y, gamma from a decomposition of u
            xt = {v: rand_ring_elem(rng, L, 3) for v in xv}
            at = {a: _rand_F(rng, spec) for a in H.vars}
            uval = eval_additive(l1.f, xt) + eval_additive(H, at)
            dec = image_decomposition(fh, uval, L)
            sol = dict(zip(fh.rvars(), dec.x))
            env = {u: uval}
            env.update({l1.xs[v]: sol[v] for v in xv})
            env.update({y: sol[y] for y in l1.ys})
            env.update(dict(zip(l1.gammas, _consts(spec, dec.alpha))))
            w = l1.forward(xt, env)
            env1 = {**env, **w}
            env1.update({l1.alphas[a]: at[a] for a in H.vars})
            ok = holds(ev, l1.antecedent, env) and holds(ev, l1.pi1_matrix(), env1)
            counts["logic1_forward"] += 1
            bad["logic1_forward"] += not ok
            # backward: planted pi1 witness, then u built to satisfy the antecedent
            w0 = {v: rand_ring_elem(rng, L, 3) for v in xv}
            a2 = {a: _rand_F(rng, spec) for a in H.vars}
            target = eval_additive(H, a2) - eval_additive(l1.f, w0)
            dec2 = image_decomposition(fh, target, L)
            sol2 = dict(zip(fh.rvars(), dec2.x))
            wt = {l1.ws[v]: w0[v] + sol2[v] for v in xv}
            xu = {l1.xs[v]: rand_ring_elem(rng, L, 3) for v in xv}
            envb = dict(xu)
            envb.update({y: sol2[y] for y in l1.ys})
            envb.update(dict(zip(l1.gammas, _consts(spec, dec2.alpha))))
            envb[u] = (eval_additive(l1.f, {v: xu[l1.xs[v]] for v in xv}) + eval_additive(l1.h, {y: envb[y] for y in l1.ys})
                       + dec2.term.evaluate(dict(zip(dec2.term.G.vars, dec2.alpha))))
            env_pi = {**envb, **wt}
            env_pi.update({l1.alphas[a]: a2[a] for a in H.vars})
            pre = holds(ev, l1.antecedent, envb) and holds(ev, l1.pi1_matrix(), env_pi)
            x_back = l1.backward(envb, wt)
            member = eval_additive(l1.f, x_back) + eval_additive(H, a2) == envb[u]
            counts["logic1_backward"] += 1
            bad["logic1_backward"] += not (pre and member)

        # logic2
        sigmas = ["exists c (c^p + c = a1)", "a1^p = a1", "exists c (c + c = a1 + a1)"]
        while counts["logic2_forward"] < n:
            f = parse_additive(rng.choice(fam[:2] + fam[4:]), spec)
            xv = f.rvars()
            H = _rand_H(rng, spec, 1)
            a1 = H.vars[0]
            e = parse_additive(rng.choice(["x1", "poly{z}*x1^2", "x1^2 + poly{z+1}*x1"]), spec)
            G = AdditivePoly(spec, {a1: [Poly.one(spec.prime_field())]}, [a1])
            v = rvar("v")
            sig = parse_sigma(rng.choice(sigmas), spec)
            pred = Pred(sig, (a1,), (TVar(a1),))
            d = ENFDisjunct(tuple(xv), (a1,), f, H, Lin.var(spec, u), ((e, G, Lin.var(spec, v)),), (pred,), spec)
            fresh = Fresh(set(xv) | {a1, u, v})
            l2 = logic2_transform(d, L, fresh)
            # forward: planted witness (x~, a~) and a second solution (w~, b~) of the antecedent
            while True:
                xt = {x: rand_ring_elem(rng, L, 3) for x in xv}
                at = {a1: _rand_F(rng, spec)}
                if ev.holds(pred, at):
                    break
            uval = eval_additive(f, xt) + eval_additive(H, at)
            vval = eval_additive(e, xt) + eval_additive(G, at) + RatFunc.const(spec, FieldElem(spec, 1))
            bt = {l2.betas[a1]: _rand_F(rng, spec)}
            sols = inverse_image(f, uval - eval_additive(H, {a1: bt[l2.betas[a1]]}), L)
            if not sols:
                bt = {l2.betas[a1]: at[a1]}
                sols = inverse_image(f, uval - eval_additive(H, at), L)
            wt = {l2.ws[x]: val for x, val in zip(xv, rng.choice(sols))}
            base = {u: uval, v: vval}
            env_ante = {**base, **wt, **bt}
            tg = l2.forward(xt, at, wt, bt)
            env2 = {**env_ante, **tg}
            ok = (ev.holds(d.matrix(), {**base, **xt, **at}) and ev.holds(l2.antecedent, env_ante)
                  and ev.holds(l2.pi2_matrix(), env2))
            counts["logic2_forward"] += 1
            bad["logic2_forward"] += not ok
            # backward: planted pi2 witness (t~, g~) over an antecedent solution (w~, b~)
            # gamma = 0 always has t = 0, so this terminates whenever some b satisfies the predicate
            while True:
                g = {l2.gammas[a1]: _rand_F(rng, spec)}
                b = {l2.betas[a1]: _rand_F(rng, spec)}
                if not ev.holds(pred, {a1: b[l2.betas[a1]] + g[l2.gammas[a1]]}):
                    continue
                tsols = inverse_image(f, -eval_additive(H, {a1: g[l2.gammas[a1]]}), L)
                if tsols:
                    break
            tt = {l2.ts[x]: val for x, val in zip(xv, rng.choice(tsols))}
            ww = {l2.ws[x]: rand_ring_elem(rng, L, 3) for x in xv}
            uval = eval_additive(f, {x: ww[l2.ws[x]] for x in xv}) + eval_additive(H, {a1: b[l2.betas[a1]]})
            xs_ = {x: ww[l2.ws[x]] + tt[l2.ts[x]] for x in xv}
            vval = (eval_additive(e, xs_) + b[l2.betas[a1]] + g[l2.gammas[a1]]
                    + RatFunc.const(spec, FieldElem(spec, 1)))
            base = {u: uval, v: vval}
            env_b = {**base, **ww, **b, **tt, **g}
            pre = ev.holds(l2.antecedent, env_b) and ev.holds(l2.pi2_matrix(), env_b)
            back = l2.backward(ww, b, tt, g)
            ok = pre and ev.holds(d.matrix(), {**base, **back})
            counts["logic2_backward"] += 1
            bad["logic2_backward"] += not ok
            if not ok and len(examples) < 5:
                examples.append({"map": "logic2_backward", "f": format_additive(f), "e": format_additive(e),
                                 "H": format_additive(H), "premise": pre,
                                 "env": {str(k): str(x) for k, x in {**env_b, **back}.items()}})
        return sum(counts.values()), sum(bad.values()), {"instances": counts, "violations": bad,
                                                         "examples": examples}

    return _timed("witness_maps", run)


# ---------------------------------------------------------------------------
# 9. universalization

UNIVERSAL_CORPUS = (
    "exists g:F (g != x)",
    "exists g:F (g = x)",
    "exists g:F (z*g + g != x)",
    "exists g:F (z*g = x and g != 1)",
    "exists g:F, h:F (g + z*h != x and g^p != h)",
    "exists g:F (z*z*g != x^p)",
    "exists g:F (g + z != x and g != 0)",
    "exists g:F, h:F (g + z*h = x)",
    "exists g:F (poly{z+1}*g != x)",
    "exists g:F (g + z*g != x + y)",
)


def suite_universal(cases=UNIVERSAL_CORPUS, cap: int = 4, seed: int = DEFAULT_SEED) -> SuiteResult:
    from .logic.ast import Fresh, all_vars, free_vars
    from .logic.semantics import eval_bounded_over_R, r_elements
    from .logic.syntax import parse_formula
    from .logic.transform import as_bounded_existential, universalize_bounded

    def run():
        L = Localization(F2, ["z"])
        R = r_elements(L, cap)
        bad, checked, per = 0, 0, []
        for text in cases:
            phi = parse_formula(text, F2)
            chi = universalize_bounded(as_bounded_existential(phi, L), L, Fresh(all_vars(phi)))
            fv = sorted(free_vars(phi), key=lambda v: v.name)
            nb = 0
            for vals in itertools.product(R, repeat=len(fv)):
                env = dict(zip(fv, vals))
                checked += 1
                if eval_bounded_over_R(phi, env, L, cap) != eval_bounded_over_R(chi, env, L, cap):
                    nb += 1
            bad += nb
            per.append({"formula": text, "assignments": len(R) ** len(fv), "violations": nb})
        return checked, bad, {"cases": per, "height_cap": cap}

    return _timed("universalization", run)


# ---------------------------------------------------------------------------
# 10. sentences

# (sentence, {(p, m): truth})
SENTENCE_CORPUS = (
    ("exists x:R (x + x = 0 and x != 0)", {(2, 1): True, (3, 1): False, (2, 2): True}),
    ("forall x:R exists y:R (y + y = x)", {(2, 1): False, (3, 1): True}),
    ("exists x:R (x^p = z)", {(2, 1): False, (3, 1): False}),
    ("exists x:R (z*x = 1)", {(2, 1): True, (3, 1): True}),
    ("exists x:R (poly{z+1}*x = 1)", {(2, 1): False, (3, 1): False}),
    ("exists x:R (x^p - x = z)", {(2, 1): False, (3, 1): False}),
    ("exists x:R (not inF(x) and x^p = x)", {(2, 1): False, (3, 1): False}),
    ("exists a:F (a^4 = a and a != 0 and a != 1)", {(2, 1): False, (2, 2): True}),
    ("exists a:F, b:F (a != 0 and b != 0 and a != b)", {(2, 1): False, (3, 1): True, (2, 2): True}),
    ("forall a:F (a^p = a)", {(2, 1): True, (3, 1): True, (2, 2): False}),
    ("exists x:R (x^p + x = 1)", {(2, 1): False, (2, 2): True, (3, 1): True}),
)


def suite_sentences(corpus=SENTENCE_CORPUS, seed: int = DEFAULT_SEED) -> SuiteResult:
    from .logic.semantics import eval_sigma_over_F
    from .logic.syntax import format_sigma, parse_formula
    from .logic.transform import sentence_to_sigma

    def run():
        bad, checked, rows = 0, 0, []
        for text, truths in corpus:
            for (p, m), want in sorted(truths.items()):
                spec = FieldSpec(p, m)
                L = Localization(spec, ["z"])
                sigma = sentence_to_sigma(parse_formula(text, spec), L)
                got = eval_sigma_over_F(sigma, {}, spec)
                checked += 1
                bad += got != want
                rows.append({"sentence": text, "field": f"p={p},m={m}", "expected": want, "got": got,
                             "sigma_size": len(format_sigma(sigma, p))})
        return checked, bad, {"rows": rows}

    return _timed("sentence_translation", run)


# ---------------------------------------------------------------------------

CRITERIA = (
    ("1 hasse identities", suite_hasse, {}, {"n": 60}),
    ("2 order inequality", suite_order, {}, {"n": 100}),
    ("3 wronskian criterion", suite_wronskian, {}, {"n": 30, "exhaustive": False}),
    ("4 normalization", suite_normalize, {}, {"n": 20, "targets": 3}),
    ("5 reduction", suite_reduction, {}, {"n": 20}),
    ("6 image decomposition", suite_image, {}, {"n": 15}),
    ("7 height bound", suite_height, {}, {"margin": 1, "with_lower": False}),
    ("8 witness maps", suite_witness, {}, {"n": 5}),
    ("9 universalization", suite_universal, {}, {"cases": UNIVERSAL_CORPUS[:4], "cap": 2}),
    ("10 sentence translation", suite_sentences, {}, {"corpus": SENTENCE_CORPUS[:4]}),
)


def run_all(quick: bool = False, seed: int = DEFAULT_SEED, only=None):
    out = []
    for label, fn, full, small in CRITERIA:
        if only and not any(label.startswith(str(o) + " ") for o in only):
            continue
        kw = dict(small if quick else full)
        kw["seed"] = seed
        res = fn(**kw)
        res.name = label
        out.append(res)
    return out
