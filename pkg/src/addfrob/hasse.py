"""Hasse (hyper)derivatives on F[z] and F(z)."""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

from .poly import Poly
from .ratfun import RatFunc, as_ratfunc, q_power_decomposition


class HasseConsistencyError(ArithmeticError):
    """Two routes to the same Hasse derivative disagreed."""


def binom_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas's theorem."""
    if k < 0 or n < 0 or k > n:
        return 0
    out = 1
    while k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        out = out * comb(nd, kd) % p
        n //= p
        k //= p
    return out


@lru_cache(maxsize=512)
def _binom_row(length: int, eps: int, p: int) -> np.ndarray:
    row = np.array([binom_mod(j, eps, p) for j in range(eps, length)], dtype=np.int64)
    row.setflags(write=False)
    return row


def hasse_poly(f: Poly, eps: int) -> Poly:
    """D_eps on a polynomial via the monomial rule."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if eps == 0:
        return f
    n = f.c.shape[0]
    if n <= eps:
        return Poly.zero(f.spec)
    mul = f.spec.tables.mul
    return Poly._raw(f.spec, mul[_binom_row(n, eps, f.spec.p), f.c[eps:]])


def _inverse_numerators(den: Poly, eps: int) -> list:
    """N_k with D_k(1/den) = N_k / den^(k+1) for k = 0..eps."""
    d = [hasse_poly(den, i) for i in range(eps + 1)]
    # T[j][e]: sum over compositions of e into j positive parts of prod D_i(den)
    T = [[None] * (eps + 1) for _ in range(eps + 1)]
    for e in range(1, eps + 1):
        T[1][e] = d[e]
    for j in range(2, eps + 1):
        for e in range(j, eps + 1):
            acc = Poly.zero(den.spec)
            for i in range(1, e - j + 2):
                if not d[i].is_zero():
                    acc = acc + d[i] * T[j - 1][e - i]
            T[j][e] = acc
    powers = [Poly.one(den.spec)]
    for _ in range(eps):
        powers.append(powers[-1] * den)
    out = [Poly.one(den.spec)]
    for k in range(1, eps + 1):
        acc = Poly.zero(den.spec)
        for j in range(1, k + 1):
            term = T[j][k]
            if term.is_zero():
                continue
            term = term * powers[k - j]
            acc = acc - term if j % 2 else acc + term
        out.append(acc)
    return out


def hasse_derivative(x, eps: int) -> RatFunc:
    """D_eps(x) using linearity, the product rule on num * (1/den) and the inverse formula."""
    x = as_ratfunc(x)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if eps == 0 or x.is_zero():
        return x
    if x.den.is_one():
        return RatFunc(hasse_poly(x.num, eps), _reduced=True)
    num, den = x.num, x.den
    inv_nums = _inverse_numerators(den, eps)
    # D_eps(num/den) = sum_i D_i(num) N_{eps-i} den^i / den^(eps+1)
    acc = Poly.zero(x.spec)
    den_pow = Poly.one(x.spec)
    for i in range(eps + 1):
        di = hasse_poly(num, i)
        if not di.is_zero() and not inv_nums[eps - i].is_zero():
            acc = acc + di * inv_nums[eps - i] * den_pow
        den_pow = den_pow * den
    return RatFunc(acc, den ** (eps + 1))


def hasse_derivatives(x, upto: int) -> list:
    """``[D_0(x), ..., D_upto(x)]``, sharing the inverse numerators across orders."""
    x = as_ratfunc(x)
    if upto < 0:
        raise ValueError("upto must be non-negative")
    if x.is_zero() or x.den.is_one():
        return [hasse_derivative(x, e) for e in range(upto + 1)]
    num, den = x.num, x.den
    inv_nums = _inverse_numerators(den, upto)
    dnum = [hasse_poly(num, i) for i in range(upto + 1)]
    out = [x]
    den_pows = [Poly.one(x.spec)]
    for _ in range(upto + 1):
        den_pows.append(den_pows[-1] * den)
    for e in range(1, upto + 1):
        acc = Poly.zero(x.spec)
        for i in range(e + 1):
            if not dnum[i].is_zero() and not inv_nums[e - i].is_zero():
                acc = acc + dnum[i] * inv_nums[e - i] * den_pows[i]
        out.append(RatFunc(acc, den_pows[e + 1]))
    return out


def check_p3(x, m: int, eps: int) -> RatFunc:
    """D_eps(x^(p^m)) computed directly and via the p-power rule; they must agree."""
    x = as_ratfunc(x)
    pm = x.spec.p ** m
    direct = hasse_derivative(x.frobenius_power(m), eps)
    if eps % pm:
        via = RatFunc.zero(x.spec)
    else:
        via = hasse_derivative(x, eps // pm).frobenius_power(m)
    if direct != via:
        raise HasseConsistencyError(f"D_{eps}(x^{pm}) disagrees: {direct} vs {via}")
    return direct


def derivative_in_basis(g, s: int, eps: int) -> RatFunc:
    """D_eps(g) for 1 <= eps < p^s through the decomposition g = sum g_i^q z^i."""
    g = as_ratfunc(g)
    q = g.spec.p ** s
    if not 1 <= eps < q:
        raise ValueError(f"eps must lie in 1..{q - 1}")
    parts = q_power_decomposition(g, s)
    acc = RatFunc.zero(g.spec)
    for i in range(eps, q):
        if parts[i].is_zero():
            continue
        b = binom_mod(i, eps, g.spec.p)
        if b:
            acc = acc + parts[i].frobenius_power(s) * RatFunc(Poly.monomial(g.spec, i - eps, b))
    return acc
