"""Univariate polynomials in ``z`` over a concrete finite field."""

from __future__ import annotations

import random

import numpy as np

from . import _kernels as K
from .gf import FieldElem, FieldError, FieldSpec, format_element

_EMPTY = np.zeros(0, dtype=np.int64)
_EMPTY.setflags(write=False)


def _trim(arr: np.ndarray) -> np.ndarray:
    n = arr.shape[0]
    if n and arr[n - 1]:
        # common case: already trimmed
        return arr.view() if arr.dtype == np.int64 and arr.flags.c_contiguous else np.ascontiguousarray(arr, dtype=np.int64)
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        return _EMPTY
    return np.ascontiguousarray(arr[: nz[-1] + 1], dtype=np.int64)


class Poly:
    """Polynomial with coefficients stored ascending as field-element indices.

    The zero polynomial has an empty coefficient array; there are never
    trailing zeros, so equality is structural.
    """

    __slots__ = ("spec", "c", "_hash")

    def __init__(self, spec: FieldSpec, coeffs=()):
        self.spec = spec
        if isinstance(coeffs, np.ndarray):
            arr = coeffs.astype(np.int64, copy=True)
        else:
            vals = []
            for x in coeffs:
                if isinstance(x, FieldElem):
                    if x.spec != spec:
                        x = spec(x)
                    vals.append(x.value)
                else:
                    vals.append(int(x) % spec.p)
            arr = np.array(vals, dtype=np.int64)
        arr = _trim(arr)
        if arr is not _EMPTY:
            arr.setflags(write=False)
        self.c = arr
        self._hash = None

    @classmethod
    def _raw(cls, spec, arr):
        obj = cls.__new__(cls)
        obj.spec = spec
        arr = _trim(arr)
        if arr is not _EMPTY:
            arr.setflags(write=False)
        obj.c = arr
        obj._hash = None
        return obj

    # construction helpers
    @classmethod
    def zero(cls, spec):
        return cls._raw(spec, _EMPTY)

    @classmethod
    def one(cls, spec):
        return cls._raw(spec, np.array([1], dtype=np.int64))

    @classmethod
    def constant(cls, spec, value):
        if isinstance(value, FieldElem):
            value = spec(value).value
        else:
            value = int(value) % spec.p
        return cls._raw(spec, np.array([value], dtype=np.int64))

    @classmethod
    def monomial(cls, spec, k, coeff=1):
        arr = np.zeros(k + 1, dtype=np.int64)
        arr[k] = coeff.value if isinstance(coeff, FieldElem) else int(coeff) % spec.p
        return cls._raw(spec, arr)

    @classmethod
    def z(cls, spec):
        return cls.monomial(spec, 1)

    # basic properties
    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return self.c.shape[0] - 1

    @property
    def lc(self) -> FieldElem:
        return FieldElem(self.spec, self.c[-1] if self.c.shape[0] else 0)

    def coeff(self, k: int) -> FieldElem:
        return FieldElem(self.spec, self.c[k] if 0 <= k < self.c.shape[0] else 0)

    def coeffs(self) -> list:
        return [FieldElem(self.spec, v) for v in self.c]

    def is_zero(self) -> bool:
        return self.c.shape[0] == 0

    def is_one(self) -> bool:
        return self.c.shape[0] == 1 and self.c[0] == 1

    def is_constant(self) -> bool:
        return self.c.shape[0] <= 1

    def is_monic(self) -> bool:
        return self.c.shape[0] > 0 and self.c[-1] == 1

    def is_over_prime_field(self) -> bool:
        return bool(np.all(self.c < self.spec.p))

    def __bool__(self):
        return self.c.shape[0] != 0

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.spec == other.spec and np.array_equal(self.c, other.c)
        if isinstance(other, (int, FieldElem)):
            return self == Poly.constant(self.spec, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, self.c.tobytes()))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.spec != self.spec:
                if other.spec.p == self.spec.p and other.is_over_prime_field():
                    return other.change_field(self.spec)
                raise FieldError("mismatched FieldSpec")
            return other
        if isinstance(other, (int, np.integer, FieldElem)):
            return Poly.constant(self.spec, other)
        return NotImplemented

    # ring operations
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if a.shape[0] < b.shape[0]:
            a, b = b, a
        out = a.copy()
        out[: b.shape[0]] = self.spec.tables.add[a[: b.shape[0]], b]
        return Poly._raw(self.spec, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.spec, self.spec.tables.neg[self.c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FieldElem) or isinstance(other, (int, np.integer)):
            v = self.spec(other).value
            return Poly._raw(self.spec, self.spec.tables.mul[v, self.c])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = self.spec.tables
        return Poly._raw(self.spec, K.poly_mul(self.c, other.c, t.add, t.mul))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        t = self.spec.tables
        q, r = K.poly_divmod(self.c, other.c, t.add, t.mul, t.neg, t.inv)
        return Poly._raw(self.spec, q), Poly._raw(self.spec, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other) -> bool:
        return (other % self).is_zero()

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.one(self.spec), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def powmod(self, n: int, mod: "Poly") -> "Poly":
        result, base = Poly.one(self.spec), self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            n >>= 1
            if n:
                base = (base * base) % mod
        return result

    def scale(self, a) -> "Poly":
        return self * a

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * self.lc.inverse()

    def __call__(self, x):
        if isinstance(x, Poly):
            return self.compose(x)
        x = self.spec(x)
        acc = FieldElem(self.spec, 0)
        for v in self.c[::-1]:
            acc = acc * x + FieldElem(self.spec, v)
        return acc

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly.zero(self.spec)
        for v in self.c[::-1]:
            acc = acc * other + Poly.constant(self.spec, FieldElem(self.spec, v))
        return acc

    def derivative(self) -> "Poly":
        if self.deg < 1:
            return Poly.zero(self.spec)
        t = self.spec.tables
        ks = np.arange(1, self.c.shape[0]) % self.spec.p
        return Poly._raw(self.spec, t.mul[ks, self.c[1:]])

    def frob_coeffs(self, k: int = 1) -> "Poly":
        """Apply the Frobenius map ``k`` times to each coefficient (``k`` may be negative)."""
        t = self.spec.tables
        table = t.frob if k >= 0 else t.frob_inv
        arr = self.c
        for _ in range(abs(k) % self.spec.m if self.spec.m > 1 else 0):
            arr = table[arr]
        return Poly._raw(self.spec, arr)

    def subs_power(self, k: int) -> "Poly":
        """Substitute ``z -> z^k``."""
        if self.is_zero() or k == 1:
            return self
        arr = np.zeros(self.deg * k + 1, dtype=np.int64)
        arr[::k] = self.c
        return Poly._raw(self.spec, arr)

    def frobenius_power(self, e: int = 1) -> "Poly":
        """``self ** (p^e)`` computed coefficient-wise."""
        return self.frob_coeffs(e).subs_power(self.spec.p ** e)

    def pth_root(self, e: int = 1) -> "Poly":
        """Inverse of :meth:`frobenius_power`; raises if not a ``p^e``-th power."""
        qq = self.spec.p ** e
        if self.is_zero():
            return self
        idx = np.flatnonzero(self.c)
        if np.any(idx % qq):
            raise ArithmeticError("not a p-power polynomial")
        return Poly._raw(self.spec, self.c[::qq]).frob_coeffs(-e)

    def change_field(self, spec: FieldSpec) -> "Poly":
        if spec == self.spec:
            return self
        if spec.p != self.spec.p or not self.is_over_prime_field():
            raise FieldError("only F_p-coefficient polynomials move between fields")
        return Poly._raw(spec, self.c.copy())

    def shift(self, k: int) -> "Poly":
        """Multiply by ``z^k``."""
        if self.is_zero() or k == 0:
            return self
        return Poly._raw(self.spec, np.concatenate([np.zeros(k, dtype=np.int64), self.c]))

    def truncate(self, n: int) -> "Poly":
        return Poly._raw(self.spec, self.c[:n].copy())

    # gcd and friends
    def gcd(self, other: "Poly") -> "Poly":
        other = self._coerce(other)
        t = self.spec.tables
        return Poly._raw(self.spec, K.poly_gcd(self.c, other.c, t.add, t.mul, t.neg, t.inv))

    def xgcd(self, other: "Poly"):
        """Return ``(g, s, t)`` with ``s*self + t*other = g`` and ``g`` monic."""
        other = self._coerce(other)
        r0, r1 = self, other
        s0, s1 = Poly.one(self.spec), Poly.zero(self.spec)
        t0, t1 = Poly.zero(self.spec), Poly.one(self.spec)
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = r0.lc.inverse()
        return r0 * inv, s0 * inv, t0 * inv

    def inverse_mod(self, mod: "Poly") -> "Poly":
        g, s, _ = self.xgcd(mod)
        if not g.is_one():
            raise ZeroDivisionError("not invertible modulo the given polynomial")
        return s % mod

    def multiplicity(self, q: "Poly") -> int:
        """Largest ``k`` with ``q^k | self`` (self nonzero, q nonconstant)."""
        if self.is_zero():
            raise ValueError("multiplicity in the zero polynomial")
        k, cur = 0, self
        while True:
            qq, r = divmod(cur, q)
            if not r.is_zero():
                return k
            cur, k = qq, k + 1

    # factorization
    def is_irreducible(self) -> bool:
        n = self.deg
        if n < 1:
            return False
        if n == 1:
            return True
        f = self.monic()
        z = Poly.z(self.spec)
        h = _frob_mod(z, f, n)
        if not ((h - z) % f).is_zero():
            return False
        for r in _prime_divisors(n):
            hr = _frob_mod(z, f, n // r)
            if not f.gcd(hr - z).is_one():
                return False
        return True

    def squarefree_decomposition(self):
        """List of ``(g, k)``: monic squarefree, pairwise coprime, product of ``g^k`` = monic(self)."""
        if self.deg < 1:
            return []
        f = self.monic()
        out = []
        d = f.derivative()
        c = f.gcd(d)
        w = f.exact_div(c)
        i = 1
        while not w.is_one():
            y = w.gcd(c)
            fac = w.exact_div(y)
            if not fac.is_one():
                out.append((fac, i))
            w = y
            c = c.exact_div(y)
            i += 1
        if not c.is_one():
            root = c.pth_root(1)
            for g, j in root.squarefree_decomposition():
                out.append((g, j * self.spec.p))
        return out

    def factor(self):
        """Monic irreducible factorization as a sorted list of ``(Q, multiplicity)``."""
        if self.is_zero():
            raise ValueError("cannot factor the zero polynomial")
        acc = {}
        for g, k in self.squarefree_decomposition():
            for h, d in _ddf(g):
                for q in _edf(h, d):
                    acc[q] = acc.get(q, 0) + k
        return sorted(acc.items(), key=lambda qk: (qk[0].deg, tuple(qk[0].c)))

    def roots(self):
        return [(-q.coeff(0), k) for q, k in self.factor() if q.deg == 1]

    def sort_key(self):
        return (self.deg, tuple(int(v) for v in self.c[::-1]))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return self.to_str("z")

    def to_str(self, var="z") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.deg, -1, -1):
            v = int(self.c[k])
            if not v:
                continue
            cs = format_element(v, self.spec)
            if "+" in cs and k > 0:
                cs = f"({cs})"
            mon = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mon:
                terms.append(cs)
            elif cs == "1":
                terms.append(mon)
            else:
                terms.append(f"{cs}*{mon}")
        return " + ".join(terms)


def _prime_divisors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _frob_mod(h: Poly, f: Poly, times: int) -> Poly:
    """``h^(q^times) mod f`` with ``q`` the field order, using coefficient Frobenius."""
    m = h.spec.m
    cur = h % f
    for _ in range(times * m):
        cur = cur.frobenius_power(1) % f
    return cur


def _ddf(f: Poly):
    out = []
    i = 1
    fstar = f
    z = Poly.z(f.spec)
    h = z % f
    while fstar.deg >= 2 * i:
        h = _frob_mod(h, fstar, 1)
        g = fstar.gcd(h - z)
        if not g.is_one():
            out.append((g, i))
            fstar = fstar.exact_div(g)
            h = h % fstar
        i += 1
    if fstar.deg > 0:
        out.append((fstar, fstar.deg))
    return out


def _edf(f: Poly, d: int):
    if f.deg == d:
        return [f.monic()]
    spec = f.spec
    rng = random.Random(0x5EED ^ f.deg ^ (hash(f) & 0xFFFF))
    n = f.deg
    while True:
        a = Poly._raw(spec, np.array([rng.randrange(spec.order) for _ in range(n)], dtype=np.int64))
        if a.deg < 1:
            continue
        if spec.p == 2:
            # absolute trace map to F_2
            t = a % f
            acc = t
            for _ in range(spec.m * d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.powmod((spec.order ** d - 1) // 2, f) - Poly.one(spec)
        g = f.gcd(b)
        if 0 < g.deg < n:
            return _edf(g, d) + _edf(f.exact_div(g), d)


def monic_polys(spec: FieldSpec, deg: int):
    """All monic polynomials of the given degree, in a fixed order."""
    import itertools

    for tail in itertools.product(range(spec.order), repeat=deg):
        yield Poly._raw(spec, np.array(list(tail) + [1], dtype=np.int64))


def all_polys(spec: FieldSpec, max_deg: int):
    """All polynomials of degree ``<= max_deg`` (including zero)."""
    import itertools

    for tup in itertools.product(range(spec.order), repeat=max_deg + 1):
        yield Poly._raw(spec, np.array(tup, dtype=np.int64))


def irreducibles(spec: FieldSpec, deg: int):
    for q in monic_polys(spec, deg):
        if q.is_irreducible():
            yield q
