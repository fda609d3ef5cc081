"""Linear independence over F(z^q), q = p^s: generalized Wronskians and a coordinate oracle."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .gf import FieldSpec
from .hasse import hasse_derivative
from .linalg import rat_det, rat_rank
from .poly import Poly
from .ratfun import RatFunc, as_ratfunc


class DimensionError(ValueError):
    """More than p^s elements can never be independent over F(z^(p^s))."""


def _family(b):
    b = [as_ratfunc(x) for x in b]
    if not b:
        raise ValueError("empty family")
    return b


def wronskian_matrix(b, eps) -> list:
    return [[hasse_derivative(x, e) for x in b] for e in eps]


def wronskian_certificate(b, s: int):
    """Lexicographically least ``(0, e_2, ..., e_n)`` with a nonzero Wronskian, or None."""
    b = _family(b)
    n = len(b)
    q = b[0].spec.p ** s
    if n > q:
        raise DimensionError(f"{n} elements exceed the dimension {q}")
    if any(x.is_zero() for x in b):
        return None
    derivs = [[hasse_derivative(x, e) for x in b] for e in range(q)]
    for tail in combinations(range(1, q), n - 1):
        eps = (0,) + tail
        M = [derivs[e] for e in eps]
        if not rat_det(M).is_zero():
            return eps
    return None


def is_independent(b, s: int) -> bool:
    b = _family(b)
    if len(b) > b[0].spec.p ** s:
        return False
    return wronskian_certificate(b, s) is not None


def coordinates_in_w(x: RatFunc, s: int) -> list:
    """Coordinates of x in the basis 1, z, ..., z^(q-1), as rational functions of w = z^q."""
    spec = x.spec
    q = spec.p ** s
    if x.is_zero():
        return [RatFunc.zero(spec) for _ in range(q)]
    # x = num * den^(q-1) / den^q and den^q is a polynomial in z^q
    num = (x.num * x.den ** (q - 1)).c
    denq = (x.den ** q).c
    den_w = Poly._raw(spec, denq[::q].copy())
    return [RatFunc(Poly._raw(spec, num[i::q].copy()), den_w) for i in range(q)]


def rank_oracle(b, s: int) -> int:
    """Rank of the family over F(z^q), computed in a fresh variable w without derivatives."""
    b = _family(b)
    rows = [coordinates_in_w(x, s) for x in b]
    return rat_rank(rows)


def independence_lift_check(b, s: int, spec: FieldSpec) -> bool:
    """Rank over F_p(z^q) and over spec(z^q) must match; returns whether b is independent."""
    b = _family(b)
    base = b[0].spec.prime_field()
    low = [x.change_field(base) for x in b]
    high = [x.change_field(spec) for x in b]
    r1, r2 = rank_oracle(low, s), rank_oracle(high, s)
    if r1 != r2:
        raise ArithmeticError(f"rank changed under field extension: {r1} vs {r2}")
    return r1 == len(b)


def check_certificate(b, eps) -> bool:
    """Recompute the determinant for a claimed certificate."""
    b = _family(b)
    return not rat_det(wronskian_matrix(b, eps)).is_zero()


def monomial_family(spec, exps) -> list:
    return [RatFunc(Poly.monomial(spec, e)) for e in exps]


def poly_coords(x: Poly, s: int) -> list:
    """Coordinates of a polynomial: ``x = sum_i A_i(z^q) z^i``; returns the A_i as polys in w."""
    q = x.spec.p ** s
    return [Poly._raw(x.spec, np.ascontiguousarray(x.c[i::q])) for i in range(q)]
