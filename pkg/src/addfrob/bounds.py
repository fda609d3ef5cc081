"""Effective bounds for p-basic and normalized additive polynomials.

Change of basis and the order bound E_ord, the reduction ``u ~_f u'``
with an explicit witness, the image decomposition, the pole-order bound C
and the height bound with an exhaustive inverse-image search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from . import _kernels as K
from .additive import AdditivePoly, BoundedTerm, F_SORT, Var, classify, eval_additive, monomial
from .gf import FieldSpec, MAX_ORDER, enumerate_field
from .independence import poly_coords, wronskian_certificate, wronskian_matrix
from .linalg import poly_det, rat_det
from .poly import Poly
from .ratfun import (
    INFINITY,
    Localization,
    Place,
    RatFunc,
    RingMembershipError,
    in_ring,
    ord_at,
    partial_fractions,
)


class NotPBasicError(ValueError):
    """The additive polynomial is not p-basic."""


class NotNormalizedError(ValueError):
    """The leading coefficients are not independent."""


class NoAdmissibleEta(ValueError):
    """No element of the field avoids the zeros of every coefficient."""


class ResourceLimitError(RuntimeError):
    """An exhaustive search would exceed the configured size."""


class ReductionError(RuntimeError):
    """A reduction step broke one of its guarantees."""


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# ---------------------------------------------------------------------------
# change of basis

@dataclass(frozen=True)
class ChangeOfBasis:
    """``b_j = sum_i A[j][i](z^q) z^i`` and ``Delta z^i = sum_j e[i][j]^q b_j``."""

    s: int
    q: int
    vars: tuple
    A: tuple
    Delta: Poly
    e: tuple

    def verify(self, f: AdditivePoly) -> bool:
        base = self.Delta.spec
        for i in range(self.q):
            lhs = self.Delta.shift(i)
            rhs = Poly.zero(base)
            for j, v in enumerate(self.vars):
                rhs = rhs + self.e[i][j].subs_power(self.q) * f.lead(v)
            if lhs != rhs:
                return False
        return True


def _minor(M, row, col):
    return [[x for c, x in enumerate(r) if c != col] for k, r in enumerate(M) if k != row]


def change_of_basis(f: AdditivePoly) -> ChangeOfBasis:
    cl = classify(f)
    if not cl.p_basic:
        raise NotPBasicError(f"{f} is not p-basic")
    s = cl.s
    q = f.p ** s
    vars = f.rvars()
    A = [poly_coords(f.lead(v), s) for v in vars]
    detA = poly_det(A)
    if q == 1:
        adj = [[Poly.one(f.base)]]
    else:
        adj = [[None] * q for _ in range(q)]
        for i in range(q):
            for j in range(q):
                m = poly_det(_minor(A, j, i))
                adj[i][j] = m if (i + j) % 2 == 0 else -m
    cb = ChangeOfBasis(
        s=s, q=q, vars=vars,
        A=tuple(tuple(r) for r in A),
        Delta=detA.subs_power(q),
        e=tuple(tuple(r) for r in adj),
    )
    if not cb.verify(f):
        raise ReductionError("change-of-basis identity failed")
    return cb


def splitting_exponents(Delta: Poly):
    """``(m, m0)`` with Delta dividing ``z^(p^(m+m0)) - z^(p^m0)``."""
    if Delta.is_zero():
        raise ValueError("Delta must be nonzero")
    if Delta.deg == 0:
        return 1, 0
    fac = Delta.factor()
    m = 1
    for Q, _ in fac:
        m = m * Q.deg // gcd(m, Q.deg)
    mult = max(k for _, k in fac)
    p = Delta.spec.p
    m0 = 0
    while p ** m0 < mult:
        m0 += 1
    target = Poly.monomial(Delta.spec, p ** (m + m0)) - Poly.monomial(Delta.spec, p ** m0)
    if not (target % Delta).is_zero():
        raise ReductionError("splitting exponents do not cover Delta")
    return m, m0


# ---------------------------------------------------------------------------
# per-polynomial reduction data

@dataclass
class _Data:
    f: AdditivePoly
    cb: ChangeOfBasis
    omega: int
    lower: list = field(default_factory=list)


def _omega(f: AdditivePoly, cb: ChangeOfBasis) -> int:
    """Least D0 such that one polynomial-part step strictly lowers every degree D > D0."""
    p, q = f.p, cb.q
    dD = cb.Delta.deg
    E = {}
    for j, v in enumerate(cb.vars):
        E[v] = max((cb.e[i][j].deg for i in range(q) if not cb.e[i][j].is_zero()), default=0)
    lower = []
    for v in cb.vars:
        cs = f.coeff_list(v)
        for k, c in enumerate(cs[:-1]):
            if not c.is_zero():
                lower.append((c.deg, k, v))

    def phi(D):
        a = (D - dD) // q
        out = dD - 1
        for dc, k, v in lower:
            out = max(out, dc + p ** k * (a + E[v]))
        return out

    c0 = max([dc + p ** k * E[v] for dc, k, v in lower] + [dD])
    upper = _ceil_div(c0 * p, p - 1) + q + dD + 2
    omega = max(dD - 1, 0)
    for D in range(max(dD, 0), upper + 1):
        if phi(D) >= D:
            omega = max(omega, D)
    return omega


@lru_cache(maxsize=256)
def _data(f: AdditivePoly) -> _Data:
    cb = change_of_basis(f)
    return _Data(f=f, cb=cb, omega=_omega(f, cb))


def _local_poly(c: Poly, lam: int, N: int) -> Poly:
    """``t^N c(lam + 1/t)`` as a polynomial in t (requires N >= deg c)."""
    base = c.spec
    one_lt = Poly(base, [1, lam])
    acc = Poly.zero(base)
    for i in range(c.deg + 1):
        ci = int(c.c[i])
        if ci:
            acc = acc + (one_lt ** i).shift(N - i) * ci
    return acc


@lru_cache(maxsize=256)
def _local_form(f: AdditivePoly, lam: int):
    """``f_lam(y) = f(t^K y)`` in the coordinate ``t = 1/(z - lam)``; returns (f_lam, K by variable)."""
    terms, Ks = {}, {}
    for v in f.rvars():
        cs = f.coeff_list(v)
        Kv = max((_ceil_div(c.deg, f.p ** k) for k, c in enumerate(cs) if not c.is_zero()), default=0)
        Kv = max(Kv, 0)
        Ks[v] = Kv
        terms[v] = [_local_poly(c, lam, Kv * f.p ** k) if not c.is_zero() else c for k, c in enumerate(cs)]
    return AdditivePoly(f.spec, terms, f.vars), Ks


# ---------------------------------------------------------------------------
# E_ord

@dataclass(frozen=True)
class OrdBoundReport:
    m: int
    m0: int
    threshold: int
    Omega: int
    Omega_inf: int
    Omega_local: dict
    Eord: int
    C: int
    W: RatFunc
    eps: tuple
    Delta: Poly


@lru_cache(maxsize=256)
def e_ord(f: AdditivePoly) -> OrdBoundReport:
    d = _data(f)
    m, m0 = splitting_exponents(d.cb.Delta)
    q = d.cb.q
    threshold = _ceil_div(f.p ** m0 + q, f.p - 1)
    local = {}
    for lam in range(f.p):
        fl, _ = _local_form(f, lam)
        local[lam] = _data(fl).omega
    omega = max([d.omega] + list(local.values()))
    C, W, eps = _pole_bound([f.lead(v) for v in f.rvars()], d.cb.s, f.p, 0)
    return OrdBoundReport(
        m=m, m0=m0, threshold=threshold, Omega=omega, Omega_inf=d.omega,
        Omega_local=local, Eord=max(threshold, omega), C=C, W=W, eps=eps, Delta=d.cb.Delta,
    )


# ---------------------------------------------------------------------------
# reduction

@dataclass
class ReductionWitness:
    u: RatFunc
    u_prime: RatFunc
    x_tilde: tuple
    Eord: int
    progress: list = field(default_factory=list)  # (place, order before, order after)

    def violations(self, f: AdditivePoly, L: Localization) -> list:
        return check_reduction_witness(f, self, L)


def _poly_eval(f: AdditivePoly, xs: dict, spec) -> Poly:
    acc = Poly.zero(spec)
    for v, cs in f.coeffs.items():
        x = xs.get(v)
        if x is None or x.is_zero():
            continue
        for k, c in enumerate(cs):
            if not c.is_zero():
                acc = acc + c.change_field(spec) * x.frobenius_power(k)
    return acc


def _q_parts(P: Poly, s: int, q: int):
    spec = P.spec
    return [Poly._raw(spec, np.ascontiguousarray(P.c[i::q])).frob_coeffs(-s) for i in range(q)]


def _reduce_polynomial(d: _Data, w: Poly, limit: int, place, progress):
    """Lower ``deg w`` to at most ``limit`` (``>= d.omega``); returns (w', y) with w' = w + f(y)."""
    f, cb = d.f, d.cb
    spec = w.spec
    if limit < d.omega:
        raise ValueError("limit below the stalling threshold")
    Df = cb.Delta.change_field(spec)
    eF = [[x.change_field(spec) for x in row] for row in cb.e]
    y = {v: Poly.zero(spec) for v in cb.vars}
    while w.deg > limit:
        quo, rem = divmod(w, Df)
        a = _q_parts(quo, cb.s, cb.q)
        xt = {}
        for j, v in enumerate(cb.vars):
            acc = Poly.zero(spec)
            for i in range(cb.q):
                if not a[i].is_zero():
                    acc = acc + a[i] * eF[i][j]
            xt[v] = acc
        new = w - _poly_eval(f, xt, spec)
        if new.deg >= w.deg:
            raise ReductionError(f"no progress at {place}: degree {w.deg} -> {new.deg}")
        progress.append((place, w.deg, new.deg))
        for v in cb.vars:
            y[v] = y[v] - xt[v]
        w = new
    return w, y


def _t_to_z(P: Poly, lam) -> RatFunc:
    """``P(1/(z - lam))``."""
    spec = P.spec
    if P.is_zero():
        return RatFunc.zero(spec)
    d = P.deg
    rev = Poly._raw(spec, P.c[::-1].copy())
    shift = Poly(spec, [-spec(lam), 1])
    return RatFunc(rev.compose(shift), shift ** d)


def _claim(d: _Data, A: Poly, Q: Poly, Lexp: int):
    """``v = A/Q^L`` with Delta | A; returns (v', x) with ``v' = v + f(x)`` and small order at Q."""
    f, cb = d.f, d.cb
    spec = A.spec
    q = cb.q
    r = (-Lexp) % q
    k = (Lexp + r) // q
    Df = cb.Delta.change_field(spec)
    num = A * Q ** r
    a_prime, rem = divmod(num, Df)
    if not rem.is_zero():
        raise ReductionError("Delta does not divide the numerator")
    a = _q_parts(a_prime, cb.s, q)
    Qk = Q ** k
    xs = []
    for j in range(q):
        acc = Poly.zero(spec)
        for i in range(q):
            if not a[i].is_zero():
                acc = acc + a[i] * cb.e[i][j].change_field(spec)
        xs.append(RatFunc(acc, Qk))
    v = RatFunc(A, Q ** Lexp)
    fx = eval_additive(f, dict(zip(cb.vars, xs)))
    return v - fx, [-x for x in xs]


def _principal(x: RatFunc, Q: Poly) -> RatFunc:
    pf = partial_fractions(x)
    acc = RatFunc.zero(x.spec)
    for Qi, j, dd in pf.terms:
        if Qi == Q:
            acc = acc + RatFunc(dd, Qi ** j)
    return acc


def _reduce_place_claim(d: _Data, rep: OrdBoundReport, part: RatFunc, Q: Poly, limit: int, mode: str, progress):
    spec = part.spec
    cb = d.cb
    p = d.f.p
    wit = [RatFunc.zero(spec) for _ in cb.vars]
    cur = part
    Df = cb.Delta.change_field(spec)
    mu = Df.multiplicity(Q) if Df.deg > 0 else 0
    while True:
        o = ord_at(cur, Place(Q))
        ell = 0 if o is None or not isinstance(o, int) else max(0, -o)
        if ell <= limit:
            break
        top = _principal(cur, Q)
        # top * Q^ell is a polynomial whose residue mod Q is the order-ell digit
        a = (top * RatFunc(Q ** ell)).num % Q
        if mode == "paper":
            P1, P0 = p ** (rep.m + rep.m0), p ** rep.m0
            A = -(a * (Q ** P1 - Q ** P0))
            Lexp = ell + P0
        else:
            Dp = Df.exact_div(Q ** mu) if mu else Df
            modQ = Q ** (mu + 1)
            target = (a * Q ** mu) % modQ
            A = Dp * ((target * Dp.inverse_mod(modQ)) % modQ) if Dp.deg > 0 else target
            Lexp = ell + mu
        u1 = RatFunc(A, Q ** Lexp)
        vprime, w = _claim(d, A, Q, Lexp)
        new = cur - u1 + vprime
        o2 = ord_at(new, Place(Q))
        ell2 = max(0, -o2) if isinstance(o2, int) else 0
        if ell2 >= ell:
            raise ReductionError(f"no order progress at {Q}: {ell} -> {ell2}")
        progress.append((str(Q), ell, ell2))
        wit = [x + y for x, y in zip(wit, w)]
        cur = new
    return cur, wit


def reduce_mod_image(f: AdditivePoly, u, L: Localization, method: str = "auto") -> ReductionWitness:
    """Find ``u' ~_f u`` with poles among those of u and pole orders at most E_ord(f).

    ``method``: ``auto`` (local coordinates at degree-one places, the divisibility
    claim with a CRT numerator elsewhere), ``crt`` or ``paper`` (claim at every
    finite place, with the respective split of each term).
    """
    spec = f.spec
    u = u if isinstance(u, RatFunc) else RatFunc(u)
    if u.spec != spec:
        u = u.change_field(spec)
    if not in_ring(u, L):
        raise RingMembershipError(f"{u} is not in R")
    rep = e_ord(f)
    E = rep.Eord
    d = _data(f)
    vars = d.cb.vars
    wit = {v: RatFunc.zero(spec) for v in vars}
    progress = []
    if u.is_zero():
        return ReductionWitness(u, u, tuple(wit[v] for v in vars), E, progress)
    pf = partial_fractions(u)
    leak = pf.poly_part
    u_prime = RatFunc.zero(spec)
    for Q, items in sorted(pf.by_place().items(), key=lambda kv: kv[0].sort_key()):
        part = RatFunc.zero(spec)
        for j, dd in items:
            part = part + RatFunc(dd, Q ** j)
        if Q.deg == 1 and method == "auto" and Q.is_over_prime_field():
            lam = int(spec.tables.neg[Q.c[0]])
            fl, Ks = _local_form(f, lam)
            dl = _data(fl)
            P = Poly.zero(spec)
            for j, dd in items:
                P = P + Poly.monomial(spec, j, dd.coeff(0))
            P2, y = _reduce_polynomial(dl, P, E, Place(Q), progress)
            u_prime = u_prime + _t_to_z(P2, lam)
            for v in vars:
                if not y[v].is_zero():
                    wit[v] = wit[v] + _t_to_z(y[v].shift(Ks[v]), lam)
        else:
            mode = "paper" if method == "paper" else "crt"
            cur, w = _reduce_place_claim(d, rep, part, Q, E, mode, progress)
            pp = partial_fractions(cur)
            leak = leak + pp.poly_part
            u_prime = u_prime + (cur - RatFunc(pp.poly_part))
            for v, x in zip(vars, w):
                wit[v] = wit[v] + x
    w2, y = _reduce_polynomial(d, leak, E, INFINITY, progress)
    u_prime = u_prime + RatFunc(w2)
    for v in vars:
        if not y[v].is_zero():
            wit[v] = wit[v] + RatFunc(y[v])
    xt = tuple(wit[v] for v in vars)
    if eval_additive(f, dict(zip(vars, xt))) != u_prime - u:
        raise ReductionError("witness does not reproduce u' - u")
    return ReductionWitness(u, u_prime, xt, E, progress)


def _pole_places(x: RatFunc):
    out = set()
    if x.is_zero():
        return out
    if x.den.deg > 0:
        out |= {Place(Q) for Q, _ in x.den.factor()}
    if x.num.deg > x.den.deg:
        out.add(INFINITY)
    return out


def check_reduction_witness(f: AdditivePoly, w: ReductionWitness, L: Localization) -> list:
    """Violated invariants (empty when the witness is valid).

    The order bound is checked at the poles of u' (see the ledger for why zeros are excluded).
    """
    bad = []
    vars = f.rvars()
    if eval_additive(f, dict(zip(vars, w.x_tilde))) != w.u_prime - w.u:
        bad.append("f(x) != u' - u")
    if not all(in_ring(x, L) for x in w.x_tilde):
        bad.append("witness not in R")
    extra = _pole_places(w.u_prime) - _pole_places(w.u)
    if extra:
        bad.append(f"new poles {sorted(map(str, extra))}")
    for v in _pole_places(w.u_prime):
        if -ord_at(w.u_prime, v) > w.Eord:
            bad.append(f"pole order {-ord_at(w.u_prime, v)} at {v} exceeds {w.Eord}")
    return bad


# ---------------------------------------------------------------------------
# image decomposition

@dataclass
class ImageDecomposition:
    x: tuple
    alpha: tuple
    N: int
    term: BoundedTerm

    def recombine(self, f: AdditivePoly) -> RatFunc:
        fx = eval_additive(f, dict(zip(f.rvars(), self.x)))
        return fx + self.term.evaluate(dict(zip(self.term.G.vars, self.alpha)))


def bounded_term_for(f: AdditivePoly, L: Localization, N: int | None = None) -> BoundedTerm:
    """``(1/e^N) sum_{i<=D} alpha_i z^i`` with ``D = N (1 + deg e)``."""
    N = e_ord(f).Eord if N is None else N
    base = f.base
    e = L.e.change_field(base) if L.S else Poly.one(base)
    D = N * (1 + e.deg)
    G = AdditivePoly(f.spec, {}, [])
    for i in range(D + 1):
        G = G + monomial(f.spec, Var(f"alpha{i}", F_SORT), 0, Poly.monomial(base, i))
    return BoundedTerm(e=e, N=N, G=G)


def image_decomposition(f: AdditivePoly, u, L: Localization, method: str = "auto") -> ImageDecomposition:
    """``u = f(x) + (1/e^N) G(alpha)`` with ``N = E_ord(f)``."""
    spec = f.spec
    w = reduce_mod_image(f, u, L, method)
    term = bounded_term_for(f, L)
    eN = RatFunc(term.e.change_field(spec)) ** term.N
    scaled = w.u_prime * eN
    nalpha = len(term.G.vars)
    if not scaled.is_poly() or scaled.num.deg >= nalpha:
        raise ReductionError("reduced element does not fit the bounded term")
    alpha = tuple(scaled.num.coeff(i) for i in range(nalpha))
    x = tuple(-t for t in w.x_tilde)
    out = ImageDecomposition(x=x, alpha=alpha, N=term.N, term=term)
    if out.recombine(f) != w.u:
        raise ReductionError("image decomposition does not recombine")
    return out


# ---------------------------------------------------------------------------
# pole-order and height bounds

def _pole_bound(leads, s: int, p: int, den_deg: int):
    leads = [x if isinstance(x, RatFunc) else RatFunc(x) for x in leads]
    q = p ** s
    if s == 0:
        if len(leads) != 1:
            raise NotNormalizedError("degree-1 polynomials need a single variable")
        W = leads[0]
        return -W.num.deg - den_deg, W, (0,)
    eps = wronskian_certificate(leads, s)
    if eps is None:
        raise NotNormalizedError("leading coefficients are dependent")
    W = rat_det(wronskian_matrix(leads, eps))
    dW = W.num.deg
    c1 = _ceil_div(1 - q - dW, q - p ** (s - 1))
    c2 = _ceil_div(1 - q - dW - den_deg, q)
    return min(c1, c2), W, eps


def pole_order_bound(f: AdditivePoly, den_deg: int) -> int:
    cl = classify(f)
    if not cl.normalized:
        raise NotNormalizedError(f"{f} is not normalized")
    return _pole_bound([f.lead(v) for v in f.rvars()], cl.s, f.p, den_deg)[0]


@dataclass(frozen=True)
class HeightBound:
    h: int
    C_places: dict
    C_inf: int
    eta: object
    eta_field: FieldSpec
    M: int
    ell: int


def _all_coeffs(f: AdditivePoly):
    return [c for cs in f.coeffs.values() for c in cs if not c.is_zero()]


def _find_eta(f: AdditivePoly, spec: FieldSpec, allow_extension: bool):
    coeffs = _all_coeffs(f)
    fields = [spec]
    if allow_extension:
        k = 2
        while spec.p ** k <= MAX_ORDER:
            if spec.p ** k > spec.order:
                fields.append(FieldSpec(spec.p, k))
            k += 1
    for F in fields:
        for eta in enumerate_field(F):
            if all(not c.change_field(F)(eta).value == 0 for c in coeffs):
                return eta, F
    raise NoAdmissibleEta(f"no admissible eta in {spec}; allow a field extension")


def height_bound(f: AdditivePoly, ell: int, L: Localization, allow_extension: bool = False) -> HeightBound:
    cl = classify(f)
    if not cl.normalized:
        raise NotNormalizedError(f"{f} is not normalized")
    s = cl.s
    leads = [f.lead(v) for v in f.rvars()]
    cq = {}
    for Q in L.S:
        cq[Q] = _pole_bound(leads, s, f.p, ell)[0]
    eta, Fe = _find_eta(f, L.spec, allow_extension)
    M = max(c.deg for c in _all_coeffs(f))
    shift = Poly(Fe, [-eta, 1])
    tl = []
    for b in leads:
        acc = Poly.zero(Fe)
        for k in range(b.deg + 1):
            bk = int(b.c[k])
            if bk:
                acc = acc + shift ** (M - k) * bk
        tl.append(acc)
    c_inf = _pole_bound(tl, s, f.p, ell)[0]
    h = sum(Q.deg * abs(c) for Q, c in cq.items()) + abs(c_inf)
    return HeightBound(h=h, C_places=cq, C_inf=c_inf, eta=eta, eta_field=Fe, M=M, ell=ell)


def _enum_polys(spec: FieldSpec, max_deg: int, cap: int):
    n = spec.order ** (max_deg + 1)
    if n > cap:
        raise ResourceLimitError(f"{n} candidates exceed the cap {cap}")
    for digits in itertools.product(range(spec.order), repeat=max_deg + 1):
        yield Poly._raw(spec, np.array(digits, dtype=np.int64))


def inverse_image(f: AdditivePoly, y, L: Localization, cap: int = 1 << 16, bound: HeightBound | None = None):
    """All ``x`` in R^n with ``f(x) = y`` (sorted), by exhaustive search inside the height bound."""
    spec = f.spec
    y = y if isinstance(y, RatFunc) else RatFunc(y)
    if not in_ring(y, L):
        return []
    ell = 0 if y.is_zero() else max(y.num.deg, y.den.deg)
    hb = bound or height_bound(f, ell, L, allow_extension=True)
    D = Poly.one(spec)
    for Q, c in hb.C_places.items():
        D = D * Q.change_field(spec) ** abs(c)
    max_deg = D.deg + abs(hb.C_inf)
    cands = [RatFunc(A, D) for A in _enum_polys(spec, max_deg, cap)]
    vars = f.rvars()
    tables = []
    for v in vars:
        fv = f.restrict([v])
        tab = {}
        for x in cands:
            tab.setdefault(eval_additive(fv, {v: x}), []).append(x)
        tables.append(tab)
    out = []

    def rec(i, acc, chosen):
        if i == len(vars) - 1:
            for x in tables[i].get(y - acc, ()):
                out.append(tuple(chosen) + (x,))
            return
        for val, xs in tables[i].items():
            for x in xs:
                rec(i + 1, acc + val, chosen + [x])

    rec(0, RatFunc.zero(spec), [])
    out = sorted(set(out), key=lambda t: tuple(x.sort_key() for x in t))
    return out


@dataclass
class ScanReport:
    h: int
    K: int
    max_num_deg: int
    candidates: int
    pairs: int
    survivors: int
    max_height: int
    violations: list


def falsification_scan(f: AdditivePoly, ell: int, L: Localization, margin: int = 2, cap: int = 1 << 13):
    """Search ``x = (A1/z^K, A2/z^K)`` with ``K = |C_z| + margin`` and ``deg A <= h + margin + K``.

    Reports every x with ``|f(x)| <= ell`` (or f(x) = 0) whose height exceeds h(f, ell).
    Two R-variables and S = {z} only.
    """
    spec = f.spec
    vars = f.rvars()
    z = Poly.z(spec.prime_field())
    if len(vars) != 2 or list(L.S) != [z.change_field(spec)] and list(L.S) != [z]:
        raise ValueError("scan supports two variables and S = {z}")
    hb = height_bound(f, ell, L, allow_extension=True)
    Cz = next(iter(hb.C_places.values()))
    Kz = abs(Cz) + margin
    max_deg = hb.h + margin + Kz
    q = f.degree()
    cands = list(_enum_polys(spec, max_deg, cap))
    # numerator of f_v(A / z^K) over z^(K q)
    nums = []
    for v in vars:
        rows = []
        for A in cands:
            acc = Poly.zero(spec)
            for k, c in enumerate(f.coeff_list(v)):
                if not c.is_zero():
                    pk = f.p ** k
                    acc = acc + (c.change_field(spec) * A.frobenius_power(k)).shift(Kz * (q - pk))
            rows.append(acc)
        nums.append(rows)
    length = max(max(r.deg for r in rows) for rows in nums) + 1
    mats = []
    for rows in nums:
        M = np.zeros((len(rows), length), dtype=np.int64)
        for i, r in enumerate(rows):
            M[i, : r.deg + 1] = r.c
        mats.append(M)
    high, low = K.pair_extent(mats[0], mats[1], spec.tables.add)
    den = Kz * q
    v = np.minimum(np.where(low < 0, den, low), den)
    hgt = np.maximum(high - v, den - v)
    ok = (high < 0) | (hgt <= ell)
    idx = np.argwhere(ok)
    violations = []
    max_h = 0
    zK = Poly.monomial(spec, Kz)
    for i, j in idx:
        x = (RatFunc(cands[i], zK), RatFunc(cands[j], zK))
        hx = max((max(t.num.deg, t.den.deg) for t in x if not t.is_zero()), default=0)
        max_h = max(max_h, hx)
        if hx > hb.h:
            violations.append(x)
    return ScanReport(
        h=hb.h, K=Kz, max_num_deg=max_deg, candidates=len(cands),
        pairs=len(cands) ** 2, survivors=len(idx), max_height=max_h, violations=violations,
    )
