"""Concrete finite fields F_{p^m}.

An element is stored as an integer in ``[0, p^m)`` whose base-``p`` digits are
its coordinates in the power basis ``1, t, ..., t^(m-1)`` of ``F_p[t]/(mod)``.
Prime-field elements are the integers ``0..p-1`` in every extension, so
``F_p``-polynomials embed without conversion.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass, field

import numpy as np

MAX_ORDER = 4096

# Conway polynomials, ascending coefficients without the leading 1.
_CONWAY = {
    (2, 1): (1,), (2, 2): (1, 1), (2, 3): (1, 1, 0), (2, 4): (1, 1, 0, 0),
    (2, 5): (1, 0, 1, 0, 0), (2, 6): (1, 1, 0, 1, 1, 0), (2, 7): (1, 1, 0, 0, 0, 0, 0),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0),
    (3, 1): (1,), (3, 2): (2, 2), (3, 3): (1, 2, 0), (3, 4): (2, 0, 0, 2),
    (3, 5): (1, 2, 0, 0, 0), (3, 6): (2, 2, 1, 0, 2, 0),
    (5, 1): (3,), (5, 2): (2, 4), (5, 3): (3, 3, 0), (5, 4): (2, 4, 4, 0),
    (7, 1): (4,), (7, 2): (3, 6), (7, 3): (4, 0, 6),
    (11, 1): (9,), (11, 2): (2, 7), (13, 1): (11,), (13, 2): (2, 12),
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _fp_poly_mulmod(a, b, mod, p):
    """Multiply two coordinate vectors modulo a monic ``mod`` (lists over F_p)."""
    m = len(mod) - 1
    prod = [0] * (2 * m - 1 if m else 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for j in range(m + 1):
                prod[k - m + j] = (prod[k - m + j] - c * mod[j]) % p
    return prod[:m] + [0] * (m - len(prod[:m]))


def _fp_is_irreducible(mod, p):
    """Brute-force irreducibility over F_p for small degree (no root / factor)."""
    deg = len(mod) - 1
    if deg <= 1:
        return True
    # trial division by every monic polynomial of degree <= deg//2
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            r = list(mod)
            for k in range(len(r) - 1, d - 1, -1):
                c = r[k]
                if c:
                    for j in range(d + 1):
                        r[k - d + j] = (r[k - d + j] - c * div[j]) % p
            if not any(r[:d]):
                return False
    return True


def default_modulus(p: int, m: int) -> tuple:
    """Conway polynomial when tabulated, else the least monic irreducible."""
    if (p, m) in _CONWAY:
        return tuple(_CONWAY[(p, m)]) + (1,)
    for tail in itertools.product(range(p), repeat=m):
        cand = tuple(reversed(tail)) + (1,)
        if cand[0] and _fp_is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")


@dataclass(frozen=True)
class FieldSpec:
    """The field F_p[t]/(modulus); ``modulus`` is ascending and monic."""

    p: int
    m: int = 1
    modulus: tuple = field(default=())

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.m < 1:
            raise FieldError("extension degree must be >= 1")
        mod = tuple(int(c) % self.p for c in self.modulus) if self.modulus else default_modulus(self.p, self.m)
        if len(mod) != self.m + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {self.m}")
        if not _fp_is_irreducible(mod, self.p):
            raise FieldError(f"modulus {mod} is reducible over F_{self.p}")
        if self.p ** self.m > MAX_ORDER:
            raise FieldError(f"field order {self.p ** self.m} exceeds table limit {MAX_ORDER}")
        object.__setattr__(self, "modulus", mod)

    @property
    def order(self) -> int:
        return self.p ** self.m

    @property
    def tables(self) -> "FieldTables":
        t = self.__dict__.get("_tables_cache")
        if t is None:
            t = _tables(self)
            object.__setattr__(self, "_tables_cache", t)
        return t

    def prime_field(self) -> "FieldSpec":
        return FieldSpec(self.p)

    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.spec != self:
                if value.spec.m == 1 and value.spec.p == self.p:
                    return FieldElem(self, value.value)
                raise FieldError("element of a different field")
            return value
        if isinstance(value, str):
            return parse_element(value, self)
        if isinstance(value, (int, np.integer)):
            return FieldElem(self, int(value) % self.p)
        if isinstance(value, (list, tuple)):
            return FieldElem(self, coords_to_index(value, self.p))
        raise TypeError(f"cannot make a field element from {value!r}")

    def zero(self):
        return FieldElem(self, 0)

    def one(self):
        return FieldElem(self, 1)

    def elements(self):
        return enumerate_field(self)

    def generator(self) -> "FieldElem":
        """The class of ``t`` (or 1 when m == 1 and the modulus is linear)."""
        return FieldElem(self, self.p if self.m > 1 else int((-self.modulus[0]) % self.p))

    def __str__(self):
        return f"p={self.p},m={self.m},mod={format_fp_poly(self.modulus, 't')}"


def coords_to_index(coords, p):
    v = 0
    for c in reversed(list(coords)):
        v = v * p + int(c) % p
    return v


def index_to_coords(v, p, m):
    out = []
    for _ in range(m):
        out.append(v % p)
        v //= p
    return out


@dataclass(frozen=True)
class FieldTables:
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray
    frob: np.ndarray
    frob_inv: np.ndarray
    sub: np.ndarray


@functools.lru_cache(maxsize=None)
def _tables(spec: FieldSpec) -> FieldTables:
    p, m, n = spec.p, spec.m, spec.order
    coords = np.array([index_to_coords(v, p, m) for v in range(n)], dtype=np.int64)
    weights = p ** np.arange(m, dtype=np.int64)
    add = ((coords[:, None, :] + coords[None, :, :]) % p) @ weights
    negc = (-coords) % p
    neg = negc @ weights
    mul = np.zeros((n, n), dtype=np.int64)
    mod = list(spec.modulus)
    for a in range(n):
        ca = list(coords[a])
        for b in range(a, n):
            v = coords_to_index(_fp_poly_mulmod(ca, list(coords[b]), mod, p), p)
            mul[a, b] = mul[b, a] = v
    inv = np.zeros(n, dtype=np.int64)
    for a in range(1, n):
        inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
    frob = np.zeros(n, dtype=np.int64)
    for a in range(n):
        x = 1
        for _ in range(p):
            x = mul[x, a]
        frob[a] = x
    frob_inv = np.zeros(n, dtype=np.int64)
    frob_inv[frob] = np.arange(n)
    sub = add[:, neg]
    for t in (add, mul, neg, inv, frob, frob_inv, sub):
        t.setflags(write=False)
    return FieldTables(add=add, mul=mul, neg=neg, inv=inv, frob=frob, frob_inv=frob_inv, sub=sub)


class FieldElem:
    """Immutable element of a :class:`FieldSpec`."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value: int):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "value", int(value))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    @property
    def coeffs(self):
        return index_to_coords(self.value, self.spec.p, self.spec.m)

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.spec != self.spec:
                raise FieldError("mismatched FieldSpec")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.spec.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.spec, self.spec.tables.add[self.value, o])

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.spec, self.spec.tables.neg[self.value])

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.spec, self.spec.tables.sub[self.value, o])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.spec, self.spec.tables.mul[self.value, o])

    __rmul__ = __mul__

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return FieldElem(self.spec, self.spec.tables.inv[self.value])

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * FieldElem(self.spec, o).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = FieldElem(self.spec, 1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.spec.p and self.value < self.spec.p
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElem({self})"

    def __str__(self):
        return format_element(self.value, self.spec)


def field_arith(a: FieldElem, b: FieldElem | None, op: str) -> FieldElem:
    """Dispatch ``add``, ``mul``, ``inv`` or ``neg``; ``b`` is ignored by the unary ops."""
    if op in ("add", "mul"):
        if b is None or a.spec != b.spec:
            raise FieldError("mismatched FieldSpec")
        return a + b if op == "add" else a * b
    if op == "inv":
        return a.inverse()
    if op == "neg":
        return -a
    raise ValueError(f"unknown field operation {op!r}")


def frobenius(a: FieldElem) -> FieldElem:
    return FieldElem(a.spec, a.spec.tables.frob[a.value])


def enumerate_field(spec: FieldSpec) -> list:
    return [FieldElem(spec, v) for v in range(spec.order)]


def remains_irreducible(q, spec: FieldSpec) -> bool:
    """Whether an F_p-irreducible polynomial stays irreducible over ``spec``."""
    from .poly import Poly

    if not isinstance(q, Poly):
        raise TypeError("expected a Poly")
    base = q.spec.prime_field() if q.spec.m > 1 else q.spec
    if q.spec.m > 1 and not q.is_over_prime_field():
        raise FieldError("polynomial must have coefficients in F_p")
    q_base = q.change_field(base)
    if not q_base.is_irreducible():
        raise FieldError(f"{q} is not irreducible over F_{spec.p}")
    return q_base.change_field(spec).is_irreducible()


# ---------------------------------------------------------------------------
# text I/O

def format_fp_poly(coeffs, var="t"):
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = int(coeffs[k])
        if not c:
            continue
        mon = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mon:
            terms.append(str(c))
        elif c == 1:
            terms.append(mon)
        else:
            terms.append(f"{c}*{mon}")
    return "+".join(terms) if terms else "0"


def format_element(value: int, spec: FieldSpec) -> str:
    return format_fp_poly(index_to_coords(value, spec.p, spec.m), "t")


def parse_fp_poly(text: str, p: int, var: str = "t") -> list:
    """Parse ``2*t^2+t+1`` style text into ascending coefficients mod p."""
    s = text.replace(" ", "")
    if not s:
        raise FieldError("empty polynomial")
    s = s.replace("-", "+-")
    coeffs: dict = {}
    for raw in s.split("+"):
        if not raw:
            continue
        sign = 1
        if raw.startswith("-"):
            sign, raw = -1, raw[1:]
        pat = re.compile(rf"^(?:(\d+)\*?)?({re.escape(var)}(?:\^(\d+))?)?$")
        mt = pat.match(raw)
        if not mt or (mt.group(1) is None and mt.group(2) is None):
            raise FieldError(f"cannot parse term {raw!r}")
        c = int(mt.group(1)) if mt.group(1) is not None else 1
        if mt.group(2) is None:
            k = 0
        else:
            k = int(mt.group(3)) if mt.group(3) is not None else 1
        coeffs[k] = (coeffs.get(k, 0) + sign * c) % p
    n = max(coeffs) + 1
    return [coeffs.get(k, 0) for k in range(n)]


def parse_element(text: str, spec: FieldSpec) -> FieldElem:
    coeffs = parse_fp_poly(text, spec.p, "t")
    # reduce modulo the defining polynomial
    mod = list(spec.modulus)
    m = spec.m
    coeffs = coeffs + [0] * max(0, m - len(coeffs))
    for k in range(len(coeffs) - 1, m - 1, -1):
        c = coeffs[k]
        if c:
            for j in range(m + 1):
                coeffs[k - m + j] = (coeffs[k - m + j] - c * mod[j]) % spec.p
    return FieldElem(spec, coords_to_index(coeffs[:m], spec.p))


def parse_field_spec(text: str) -> FieldSpec:
    """Parse ``p=2,m=2,mod=t^2+t+1`` (``m`` and ``mod`` optional)."""
    parts = {}
    for chunk in text.replace(" ", "").split(","):
        if not chunk:
            continue
        if "=" not in chunk:
            raise FieldError(f"bad field spec component {chunk!r}")
        k, v = chunk.split("=", 1)
        parts[k.lower()] = v
    if "p" not in parts:
        raise FieldError("field spec needs p=")
    p = int(parts["p"])
    m = int(parts.get("m", 1))
    if "mod" in parts:
        mod = parse_fp_poly(parts["mod"], p, "t")
        return FieldSpec(p, m, tuple(mod))
    return FieldSpec(p, m)
