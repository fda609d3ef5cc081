"""Truth in F (for L_p formulas) and bounded truth in R (for L_p(z)^e formulas).

A block of F-quantifiers over a conjunction is decided by linear algebra over
F_p: with F = F_p^m, a term ``sum c(z) a^(p^k)`` in F-variables is a polynomial
in z whose coefficients are F_p-linear in the coordinates of the a's.
Equations cut out an affine space and inequations only need checking on the
image of the stacked inequation maps.  Other conjuncts are checked by
enumerating the projection of the solution space onto the variables they
mention.  ``eval_sigma_naive`` enumerates F directly and serves as the
reference.

Over R truth is undecidable in general.  The bounded evaluator lets
R-quantifiers range over elements of height at most ``cap`` and solves a
quantified R-variable exactly whenever it occurs as ``c*x^(p^k)`` in an
equation of the body, which keeps "exists y (x = y*Q + ...)" style formulas
exact.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from ..additive import F_SORT, Var
from ..bounds import ResourceLimitError
from ..gf import FieldElem, FieldSpec, coords_to_index, index_to_coords
from ..linalg import field_kernel, field_rref, field_solve
from ..poly import Poly, all_polys
from ..ratfun import Localization, RatFunc
from .ast import (
    And, Eq, Exists, Forall, Formula, Implies, InF, Lin, Not, Or, Pred, conj, free_vars, lin, nnf,
)


def _index(spec: FieldSpec, v) -> int:
    if isinstance(v, FieldElem):
        return v.value
    if isinstance(v, RatFunc):
        if not v.is_poly() or v.num.deg > 0:
            raise ValueError("value is not in F")
        return v.num.coeff(0).value
    return int(v) % spec.order


def _env(spec, assignment) -> dict:
    out = {}
    for k, v in (assignment or {}).items():
        key = k if isinstance(k, Var) else Var(k, F_SORT)
        out[key] = _index(spec, v)
    return out


def _grid(p: int, r: int) -> np.ndarray:
    """All vectors of F_p^r as rows."""
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(p ** r, dtype=np.int64)
    return np.stack([(idx // p ** i) % p for i in range(r)], axis=1)


@lru_cache(maxsize=1 << 15)
def _sorted_free(phi: Formula) -> tuple:
    return tuple(sorted(free_vars(phi), key=lambda v: v.name))


class _Coords:
    """F as the F_p-vector space F_p^m with the Frobenius as a matrix."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p, self.m = spec.p, spec.m
        t = spec.tables
        self.t = t
        cols = [index_to_coords(int(t.frob[spec.p ** j]), spec.p, spec.m) for j in range(spec.m)]
        self.frob = np.array(cols, dtype=np.int64).T % spec.p
        self._pow = {0: np.eye(spec.m, dtype=np.int64)}
        self.weights = spec.p ** np.arange(spec.m, dtype=np.int64)

    def frob_pow(self, k: int) -> np.ndarray:
        k %= self.m
        if k not in self._pow:
            self._pow[k] = (self.frob_pow(k - 1) @ self.frob) % self.p
        return self._pow[k]

    def matrix(self, cs, i: int = 0) -> np.ndarray:
        """Matrix of the z^i coefficient of ``a -> sum_k c_k(z) a^(p^k)``."""
        out = np.zeros((self.m, self.m), dtype=np.int64)
        for k, c in enumerate(cs):
            if not c.is_zero() and i <= c.deg:
                ck = c.coeff(i).value
                if ck:
                    out = out + ck * self.frob_pow(k)
        return out % self.p

    def coords(self, idx: int) -> np.ndarray:
        return np.array(index_to_coords(idx, self.p, self.m), dtype=np.int64)

    def index(self, vec) -> int:
        return coords_to_index([int(x) for x in vec], self.p)


def _dnf_small(body: Formula, limit: int = 256):
    """Clauses of body when it is a small And/Or tree of literals, else None."""
    if isinstance(body, Or):
        out = []
        for a in body.args:
            c = _dnf_small(a, limit)
            if c is None:
                return None
            out += c
            if len(out) > limit:
                return None
        return out
    if isinstance(body, And):
        out = [()]
        for a in body.args:
            c = _dnf_small(a, limit)
            if c is None:
                return None
            out = [x + y for x in out for y in c]
            if len(out) > limit:
                return None
        return out
    if isinstance(body, (Exists, Forall)):
        return None
    return [(body,)]


class _Plan:
    """Env-independent part of one F-block over a conjunction."""

    __slots__ = ("pre", "vars", "A", "eqs", "K", "nes", "BK", "rest", "rest_cols", "proj",
                 "linear_body", "others")


class _BlockSolver:
    """Existential F-blocks by linear algebra; subclasses evaluate atoms and outer parts."""

    def __init__(self, spec: FieldSpec, cap: int):
        self.spec = spec
        self.base = spec.prime_field()
        self.cap = cap
        self.C = _Coords(spec)
        self._plans = {}
        self._memo = {}

    def holds(self, phi: Formula, env) -> bool:  # pragma: no cover
        raise NotImplementedError

    def outer(self, L: Lin, env, D: int):
        """Stacked coordinates of the z^0..z^D coefficients of L under env, or None."""
        raise NotImplementedError  # pragma: no cover

    def from_index(self, idx: int):
        return idx

    def _memo_key(self, phi, env):
        return (phi, tuple(env[v] for v in _sorted_free(phi)))

    def exists_block(self, vars: tuple, body: Formula, env) -> bool:
        bound = set(vars)
        if isinstance(body, Or):
            return any(self.exists_block(vars, a, env) for a in body.args)
        lits = body.args if isinstance(body, And) else (body,)
        if any(isinstance(a, Or) and free_vars(a) & bound for a in lits):
            clauses = _dnf_small(body)
            if clauses is not None:
                return any(self.exists_block(vars, conj(*c), env) for c in clauses)
        plan = self._plan(vars, body)
        if not all(self.holds(a, env) for a in plan.pre):
            return False
        if not plan.vars:
            return all(self.holds(a, env) for a in plan.rest)
        p = self.C.p
        if plan.A is not None:
            parts = []
            for Lout, D in plan.eqs:
                o = self.outer(Lout, env, D)
                if o is None:
                    return False
                parts.append((-o) % p)
            x0 = field_solve(plan.A, np.concatenate(parts), self.base)
            if x0 is None:
                return False
        else:
            x0 = np.zeros(len(plan.vars) * self.C.m, dtype=np.int64)
        if not plan.rest:
            return self._ineq_feasible(plan, x0, env)
        # enumerate the projection of the solution set onto the variables of the rest
        cols, R = plan.rest_cols, plan.proj
        r = R.shape[0]
        if p ** r > self.cap:
            raise ResourceLimitError(f"projection of size {p}^{r} exceeds cap {self.cap}")
        Y = (_grid(p, r) @ R + x0[cols]) % p
        m, w = self.C.m, self.C.weights
        remaining = tuple(v for v in plan.vars if v not in plan.others)
        for row in Y:
            local = dict(env)
            for i, v in enumerate(plan.others):
                local[v] = self.from_index(int(row[i * m:(i + 1) * m] @ w))
            if not all(self.holds(a, local) for a in plan.rest):
                continue
            if self.exists_block(remaining, plan.linear_body, local):
                return True
        return False

    def _ineq_feasible(self, plan, x0, env) -> bool:
        p = self.C.p
        active = []
        for k, (Lout, D, Ai) in enumerate(plan.nes):
            o = self.outer(Lout, env, D)
            if o is not None:
                active.append((k, Ai, o))
        if not active:
            return True
        if plan.K.shape[0] == 0:
            return all(((Ai @ x0 + o) % p).any() for _, Ai, o in active)
        ok = None
        for k, Ai, o in active:
            hit = ((plan.BK[k] + (Ai @ x0 + o)) % p).any(axis=1)
            ok = hit if ok is None else ok & hit
        return bool(ok.any())

    def _plan(self, vars: tuple, body: Formula) -> _Plan:
        key = (vars, body)
        plan = self._plans.get(key)
        if plan is not None:
            return plan
        spec, p, m = self.spec, self.C.p, self.C.m
        bound = set(vars)
        lits = body.args if isinstance(body, And) else (body,)
        plan = _Plan()
        plan.pre = [a for a in lits if not (free_vars(a) & bound)]
        eqs, nes, rest = [], [], []
        for a in lits:
            if not (free_vars(a) & bound):
                continue
            if isinstance(a, Eq):
                eqs.append(lin(a.lhs, spec) - lin(a.rhs, spec))
            elif isinstance(a, Not) and isinstance(a.arg, Eq):
                nes.append(lin(a.arg.lhs, spec) - lin(a.arg.rhs, spec))
            else:
                rest.append(a)
        used = [v for v in vars if any(v in free_vars(a) for a in lits)]
        plan.vars = tuple(used)
        plan.rest = rest
        n = len(used) * m

        def block(L):
            D = max((c.deg for v in used for c in L.poly.coeffs.get(v, ()) if not c.is_zero()), default=0)
            A = np.zeros((m * (D + 1), n), dtype=np.int64)
            for i, v in enumerate(used):
                cs = L.poly.coeffs.get(v)
                if cs:
                    for d in range(D + 1):
                        A[d * m:(d + 1) * m, i * m:(i + 1) * m] = self.C.matrix(cs, d)
            return A, D

        eb = [block(L) for L in eqs]
        nb = [block(L) for L in nes]
        plan.eqs = [(L.drop(used), D) for L, (_, D) in zip(eqs, eb)]
        plan.nes = [(L.drop(used), D, A) for L, (A, D) in zip(nes, nb)]
        if eqs and n:
            plan.A = np.vstack([A for A, _ in eb])
            plan.K = field_kernel(plan.A, self.base)
        else:
            plan.A = None
            plan.K = np.eye(n, dtype=np.int64)
        K = plan.K
        plan.BK = []
        if nes and K.shape[0] and not rest:
            mats = [(A @ K.T) % p for A, _ in nb]
            _, piv = field_rref(np.vstack(mats), self.base)
            piv = [int(c) for c in piv]
            if p ** len(piv) > self.cap:
                raise ResourceLimitError(f"inequation image of size {p}^{len(piv)} exceeds cap {self.cap}")
            T = _grid(p, len(piv))
            full = np.zeros((T.shape[0], K.shape[0]), dtype=np.int64)
            full[:, piv] = T
            plan.BK = [(full @ M.T) % p for M in mats]
        if rest:
            others = [v for v in used if any(v in free_vars(a) for a in rest)]
            plan.others = tuple(others)
            cols = [used.index(v) * m + j for v in others for j in range(m)]
            plan.rest_cols = np.array(cols, dtype=np.int64)
            if K.shape[0]:
                R, piv = field_rref(K[:, cols], self.base)
                plan.proj = R[:len(piv)] % p
            else:
                plan.proj = np.zeros((0, len(cols)), dtype=np.int64)
            plan.linear_body = conj(*(a for a in lits if a not in rest))
        self._plans[key] = plan
        return plan

    def _block(self, phi, env) -> bool:
        """A maximal leading run of same-kind F-quantifiers."""
        kind = type(phi)
        vars, body = [], phi
        while isinstance(body, kind) and body.var.sort == F_SORT:
            vars.append(body.var)
            body = body.body
        if kind is Exists:
            return self.exists_block(tuple(vars), nnf(body), env)
        return not self.exists_block(tuple(vars), nnf(Not(body)), env)


class SigmaEvaluator(_BlockSolver):
    """Decides L_p formulas in F = F_{p^m}."""

    def __init__(self, spec: FieldSpec, cap: int = 1 << 16):
        super().__init__(spec, cap)

    def value(self, L: Lin, env) -> int:
        t = self.C.t
        c = L.const
        acc = c.coeff(0).value if not c.is_zero() else 0
        for v, cs in L.poly.coeffs.items():
            x = env[v]
            for k, cf in enumerate(cs):
                if cf.is_zero():
                    continue
                y = x
                for _ in range(k % self.spec.m):
                    y = int(t.frob[y])
                acc = int(t.add[acc, t.mul[cf.coeff(0).value, y]])
        return acc

    def outer(self, L: Lin, env, D: int):
        return self.C.coords(self.value(L, env))

    def holds(self, phi: Formula, env) -> bool:
        if isinstance(phi, Eq):
            return self.value(lin(phi.lhs, self.spec) - lin(phi.rhs, self.spec), env) == 0
        if isinstance(phi, Not):
            return not self.holds(phi.arg, env)
        if isinstance(phi, And):
            return all(self.holds(a, env) for a in phi.args)
        if isinstance(phi, Or):
            return any(self.holds(a, env) for a in phi.args)
        if isinstance(phi, Implies):
            return (not self.holds(phi.lhs, env)) or self.holds(phi.rhs, env)
        key = self._memo_key(phi, env)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(phi, Pred):
            sub = {p: self.value(lin(a, self.spec), env) for p, a in zip(phi.params, phi.args)}
            out = self.holds(phi.sigma, sub)
        elif isinstance(phi, (Exists, Forall)):
            out = self._block(phi, env)
        else:
            raise TypeError(f"not an L_p formula: {phi!r}")
        self._memo[key] = out
        return out

    # kept for callers of the earlier name
    def exists(self, vars: tuple, body: Formula, env) -> bool:
        return self.exists_block(vars, body, env)


def eval_sigma_over_F(sigma: Formula, assignment: dict | None, spec: FieldSpec, cap: int = 1 << 16) -> bool:
    """Truth of an L_p formula in F under an assignment of its free variables."""
    return SigmaEvaluator(spec, cap).holds(sigma, _env(spec, assignment))


def eval_sigma_naive(sigma: Formula, assignment: dict | None, spec: FieldSpec, cap: int = 1 << 20) -> bool:
    """Reference evaluator: every quantifier enumerates all of F."""
    ev = SigmaEvaluator(spec)
    budget = [cap]

    def go(phi, env):
        if isinstance(phi, (Exists, Forall)):
            want = isinstance(phi, Exists)
            for a in range(spec.order):
                budget[0] -= 1
                if budget[0] < 0:
                    raise ResourceLimitError("naive enumeration exceeded its cap")
                if go(phi.body, {**env, phi.var: a}) == want:
                    return want
            return not want
        if isinstance(phi, Not):
            return not go(phi.arg, env)
        if isinstance(phi, And):
            return all(go(a, env) for a in phi.args)
        if isinstance(phi, Or):
            return any(go(a, env) for a in phi.args)
        if isinstance(phi, Implies):
            return (not go(phi.lhs, env)) or go(phi.rhs, env)
        if isinstance(phi, Pred):
            sub = {p: ev.value(lin(a, spec), env) for p, a in zip(phi.params, phi.args)}
            return go(phi.sigma, sub)
        return ev.holds(phi, env)

    return go(sigma, _env(spec, assignment))


# ---------------------------------------------------------------------------
# bounded truth in R

@lru_cache(maxsize=64)
def _r_elements(L: Localization, cap: int) -> tuple:
    """Elements of R of height <= cap, as reduced fractions A/B with B a product of S."""
    spec = L.spec
    dens = [Poly.one(spec)]
    frontier = [Poly.one(spec)]
    while frontier:
        nxt = []
        for b in frontier:
            for s in L.S:
                c = b * s.change_field(spec)
                if c.deg <= cap and c not in dens:
                    dens.append(c)
                    nxt.append(c)
        frontier = nxt
    out = [RatFunc.zero(spec)]
    for A in all_polys(spec, cap):
        if A.is_zero():
            continue
        for B in dens:
            if A.gcd(B).is_one():
                out.append(RatFunc(A, B))
    return tuple(out)


def r_elements(L: Localization, cap: int) -> tuple:
    """``{x in R : |x| <= cap} or {0}`` in a fixed order."""
    return _r_elements(L, cap)


class BoundedEvaluator(_BlockSolver):
    """Bounded truth in R; F-blocks are exact, R-quantifiers are solved or enumerated."""

    def __init__(self, L: Localization, cap: int = 2, solve: bool = True, sigma_cap: int = 1 << 16,
                 budget: int = 1 << 22):
        super().__init__(L.spec, sigma_cap)
        self.L = L
        self.hcap = cap
        self.solve = solve
        self.sigma = SigmaEvaluator(L.spec, sigma_cap)
        self.budget = budget
        self._F = tuple(RatFunc.const(L.spec, FieldElem(L.spec, a)) for a in range(L.spec.order))

    def from_index(self, idx: int):
        return self._F[idx]

    def outer(self, L: Lin, env, D: int):
        r = L.evaluate(env)
        if not r.is_poly():
            return None
        num = r.num
        if not num.is_zero() and num.deg > D:
            return None
        return np.concatenate([self.C.coords(num.coeff(i).value if not num.is_zero() and i <= num.deg else 0)
                               for i in range(D + 1)])

    def domain(self, v: Var):
        if v.sort == F_SORT:
            return self._F
        return _r_elements(self.L, self.hcap)

    def holds(self, phi: Formula, env) -> bool:
        spec = self.spec
        if isinstance(phi, Eq):
            return (lin(phi.lhs, spec) - lin(phi.rhs, spec)).evaluate(env).is_zero()
        if isinstance(phi, InF):
            x = lin(phi.arg, spec).evaluate(env)
            return x.is_poly() and x.num.deg <= 0
        if isinstance(phi, Not):
            return not self.holds(phi.arg, env)
        if isinstance(phi, And):
            return all(self.holds(a, env) for a in phi.args)
        if isinstance(phi, Or):
            return any(self.holds(a, env) for a in phi.args)
        if isinstance(phi, Implies):
            return (not self.holds(phi.lhs, env)) or self.holds(phi.rhs, env)
        key = self._memo_key(phi, env)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(phi, Pred):
            vals = {}
            out = True
            for par, a in zip(phi.params, phi.args):
                x = lin(a, spec).evaluate(env)
                if not (x.is_poly() and x.num.deg <= 0):
                    out = False
                    break
                vals[par] = _index(spec, x)
            out = out and self.sigma.holds(phi.sigma, vals)
        elif isinstance(phi, (Exists, Forall)):
            if phi.var.sort == F_SORT:
                out = self._block(phi, env)
            elif isinstance(phi, Exists):
                out = self._exists(phi.var, nnf(phi.body), env)
            else:
                out = not self._exists(phi.var, nnf(Not(phi.body)), env)
        else:
            raise TypeError(f"not a formula: {phi!r}")
        self._memo[key] = out
        return out

    def _solved(self, v: Var, body: Formula, env):
        """If a conjunct of body is an equation in which v occurs as ``c*v^(p^k)``, the forced value."""
        while isinstance(body, Exists):
            body = body.body
        lits = body.args if isinstance(body, And) else (body,)
        for a in lits:
            if not isinstance(a, Eq):
                continue
            Ln = lin(a.lhs, self.spec) - lin(a.rhs, self.spec)
            cs = Ln.poly.coeffs.get(v)
            if not cs or any(w not in env for w in Ln.vars() if w != v):
                continue
            nz = [k for k, c in enumerate(cs) if not c.is_zero()]
            if len(nz) != 1:
                continue
            k = nz[0]
            rest = Ln.drop([v]).evaluate(env)
            val = -rest / RatFunc(cs[k].change_field(self.spec))
            if k:
                try:
                    val = val.pth_root(k)
                except (ValueError, ArithmeticError):
                    return False, None
            if v.sort == F_SORT:
                if not (val.is_poly() and val.num.deg <= 0):
                    return False, None
            elif not self.L.contains(val):
                return False, None
            return True, val
        return None

    def _exists(self, v: Var, body: Formula, env) -> bool:
        if self.solve:
            s = self._solved(v, body, env)
            if s is not None:
                ok, val = s
                return ok and self.holds(body, {**env, v: val})
        for x in self.domain(v):
            self.budget -= 1
            if self.budget < 0:
                raise ResourceLimitError("bounded evaluation exceeded its budget")
            if self.holds(body, {**env, v: x}):
                return True
        return False


def eval_bounded_over_R(phi: Formula, assignment: dict | None, L: Localization, cap: int = 2,
                        solve: bool = True, budget: int = 1 << 22) -> bool:
    """Truth of phi in R with R-quantifiers restricted to height <= cap."""
    spec = L.spec
    env = {}
    for k, v in (assignment or {}).items():
        if not isinstance(v, RatFunc):
            v = RatFunc(v) if isinstance(v, Poly) else RatFunc.const(spec, FieldElem(spec, _index(spec, v)))
        env[k] = v
    return BoundedEvaluator(L, cap, solve, budget=budget).holds(phi, env)


def iter_field(spec: FieldSpec, n: int):
    """All n-tuples of field indices."""
    return itertools.product(range(spec.order), repeat=n)
