"""Rational functions over F_{p^m}, the localized ring R = F[z, S^-1], orders and heights."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce

from .gf import FieldElem, FieldError, FieldSpec, remains_irreducible
from .poly import Poly


class RingMembershipError(ValueError):
    """An element was required to lie in R but has a pole outside S."""


class _OrdInfinity:
    """Order of the zero function.  Compares above every integer; no arithmetic."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ORD_INF"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ORD_INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def _no(self, *_):
        raise TypeError("no arithmetic on the order of zero")

    __add__ = __radd__ = __sub__ = __rsub__ = __neg__ = __mul__ = __rmul__ = _no


ORD_INF = _OrdInfinity()


class RatFunc:
    """Reduced fraction ``num/den`` with monic ``den`` (``0`` is ``0/1``)."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, _reduced=False):
        if not isinstance(num, Poly):
            raise TypeError("RatFunc numerator must be a Poly")
        spec = num.spec
        if den is None:
            den = Poly.one(spec)
        elif not isinstance(den, Poly):
            den = Poly.constant(spec, den)
        elif den.spec != spec:
            den = num._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly.one(spec)
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num, den = num.exact_div(g), den.exact_div(g)
                if not den.is_monic():
                    inv = den.lc.inverse()
                    num, den = num * inv, den * inv
        self.num = num
        self.den = den
        self._hash = None

    @property
    def spec(self) -> FieldSpec:
        return self.num.spec

    @classmethod
    def zero(cls, spec):
        return cls(Poly.zero(spec), _reduced=True)

    @classmethod
    def one(cls, spec):
        return cls(Poly.one(spec), _reduced=True)

    @classmethod
    def z(cls, spec):
        return cls(Poly.z(spec), _reduced=True)

    @classmethod
    def const(cls, spec, value):
        return cls(Poly.constant(spec, value), _reduced=True)

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.is_one()

    def is_constant(self):
        return self.den.is_one() and self.num.deg <= 0

    def __bool__(self):
        return not self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.spec != self.spec:
                return RatFunc(self.num._coerce(other.num), self.num._coerce(other.den))
            return other
        if isinstance(other, Poly):
            return RatFunc(self.num._coerce(other), _reduced=True)
        if isinstance(other, (int, FieldElem)):
            return RatFunc.const(self.spec, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.is_zero() or o.is_zero():
            return RatFunc.zero(self.spec)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    def frobenius_power(self, e: int = 1):
        """``self ** (p^e)``."""
        return RatFunc(self.num.frobenius_power(e), self.den.frobenius_power(e), _reduced=True)

    def pth_root(self, e: int = 1):
        return RatFunc(self.num.pth_root(e), self.den.pth_root(e), _reduced=True)

    def subs_power(self, k: int):
        return RatFunc(self.num.subs_power(k), self.den.subs_power(k), _reduced=True)

    def change_field(self, spec):
        return RatFunc(self.num.change_field(spec), self.den.change_field(spec), _reduced=True)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        o = self._coerce(other) if isinstance(other, (Poly, int, FieldElem)) else NotImplemented
        if o is NotImplemented:
            return o
        return self == o

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        n = str(self.num)
        if " " in n:
            n = f"({n})"
        return f"{n}/({self.den})"

    def sort_key(self):
        return (height_or_zero(self), self.den.sort_key(), self.num.sort_key())


def as_ratfunc(x, spec=None) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x, _reduced=True)
    if spec is None:
        raise TypeError("need a field to coerce a scalar")
    return RatFunc.const(spec, x)


def rat_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# places, orders, heights

@dataclass(frozen=True)
class Place:
    """A monic irreducible ``Q`` over the working field, or the place at infinity."""

    Q: Poly | None = None

    @property
    def is_infinity(self) -> bool:
        return self.Q is None

    @property
    def degree(self) -> int:
        return 1 if self.Q is None else self.Q.deg

    def __str__(self):
        return "INFINITY" if self.Q is None else f"({self.Q})"


INFINITY = Place(None)


def place(Q: Poly) -> Place:
    if not Q.is_monic() or not Q.is_irreducible():
        raise ValueError(f"{Q} is not monic irreducible")
    return Place(Q)


def ord_at(x: RatFunc, v: Place):
    """Signed multiplicity of ``v`` in ``x``; ``ORD_INF`` for ``x == 0``."""
    if x.is_zero():
        return ORD_INF
    if v.is_infinity:
        return x.den.deg - x.num.deg
    Q = v.Q if v.Q.spec == x.spec else x.num._coerce(v.Q)
    return x.num.multiplicity(Q) - x.den.multiplicity(Q)


def height(x: RatFunc) -> int:
    if x.is_zero():
        raise ValueError("The height of 0 is not defined")
    return max(x.num.deg, x.den.deg)


def height_or_zero(x: RatFunc) -> int:
    return 0 if x.is_zero() else height(x)


def poles(x: RatFunc) -> set:
    """Set of places where ``x`` has a pole (finite ones via factoring ``den``)."""
    out = {Place(q) for q, _ in x.den.factor()} if x.den.deg > 0 else set()
    if not x.is_zero() and x.num.deg > x.den.deg:
        out.add(INFINITY)
    return out


# ---------------------------------------------------------------------------
# partial fractions

@dataclass(frozen=True)
class PartialFractionForm:
    poly_part: Poly
    terms: tuple  # of (Q, j, d) meaning d / Q^j

    def recombine(self) -> RatFunc:
        acc = RatFunc(self.poly_part, _reduced=True)
        for Q, j, d in self.terms:
            acc = acc + RatFunc(d, Q ** j)
        return acc

    def by_place(self) -> dict:
        out: dict = {}
        for Q, j, d in self.terms:
            out.setdefault(Q, []).append((j, d))
        return out


def partial_fractions(x: RatFunc) -> PartialFractionForm:
    spec = x.spec
    g, r = divmod(x.num, x.den)
    terms = []
    if x.den.deg > 0:
        factors = x.den.factor()
        for Q, k in factors:
            Qk = Q ** k
            rest = x.den.exact_div(Qk)
            # numerator of the Q-primary piece A/Q^k with deg A < k deg Q
            A = (r * rest.inverse_mod(Qk)) % Qk
            j = k
            while not A.is_zero():
                A, d = divmod(A, Q)
                if not d.is_zero():
                    terms.append((Q, j, d))
                j -= 1
    terms.sort(key=lambda t: (t[0].sort_key(), -t[1]))
    return PartialFractionForm(poly_part=g if not g.is_zero() else Poly.zero(spec), terms=tuple(terms))


def principal_part(x: RatFunc, Q: Poly) -> RatFunc:
    """Sum of the partial-fraction terms of ``x`` at ``Q``."""
    if x.den.deg <= 0:
        return RatFunc.zero(x.spec)
    k = x.den.multiplicity(Q)
    if k == 0:
        return RatFunc.zero(x.spec)
    Qk = Q ** k
    rest = x.den.exact_div(Qk)
    r = x.num % x.den
    A = (r * rest.inverse_mod(Qk)) % Qk
    return RatFunc(A, Qk)


# ---------------------------------------------------------------------------
# the ring R

class Localization:
    """R = F[z, S^-1] for S a finite set of F_p-irreducibles staying irreducible over F."""

    def __init__(self, spec: FieldSpec, S=()):
        self.spec = spec
        checked = []
        for s in S:
            if isinstance(s, str):
                s = parse_poly(s, spec.prime_field())
            if not s.is_monic():
                raise ValueError(f"S element {s} must be monic")
            if not remains_irreducible(s, spec):
                raise FieldError(f"{s} does not remain irreducible over {spec}")
            s = s.change_field(spec)
            if s in checked:
                raise ValueError(f"duplicate S element {s}")
            checked.append(s)
        self.S = tuple(sorted(checked, key=Poly.sort_key))

    def __repr__(self):
        return f"Localization({self.spec}, S=[{', '.join(map(str, self.S))}])"

    def __eq__(self, other):
        return isinstance(other, Localization) and self.spec == other.spec and self.S == other.S

    def __hash__(self):
        return hash((self.spec, self.S))

    @property
    def e(self) -> Poly:
        """Product of the elements of S."""
        return reduce(lambda a, b: a * b, self.S, Poly.one(self.spec))

    def places(self):
        return [Place(s) for s in self.S]

    def contains(self, x: RatFunc) -> bool:
        return in_ring(x, self)

    def split_invertible(self, c: Poly):
        """Write ``c = c_S * c_rest`` with ``c_S`` a product of S-powers and ``c_rest`` coprime to S."""
        cs = Poly.one(self.spec)
        rest = c
        for s in self.S:
            while rest.deg >= s.deg:
                q, r = divmod(rest, s)
                if not r.is_zero():
                    break
                rest, cs = q, cs * s
        return cs, rest

    def with_field(self, spec: FieldSpec) -> "Localization":
        return Localization(spec, [s.change_field(spec.prime_field()) for s in self.S])


def in_ring(x: RatFunc, L: Localization) -> bool:
    x = x if x.spec == L.spec else RatFunc(L.S[0]._coerce(x.num) if L.S else x.num, x.den)
    _, rest = L.split_invertible(x.den)
    return rest.deg == 0


def _require_ring(u: RatFunc, L: Localization):
    if not in_ring(u, L):
        raise RingMembershipError(f"{u} is not an element of R")


def divide_with_remainder(u: RatFunc, c: Poly, L: Localization):
    """Return ``(v, r)`` with ``u = v*c + r``, ``v`` in R and ``deg r < deg c``."""
    if c.deg < 1:
        raise ValueError("divisor must be a nonconstant polynomial")
    _require_ring(u, L)
    spec = u.spec
    c_s, c_rest = L.split_invertible(c)
    if c_rest.deg < 1:
        return u / RatFunc(c), Poly.zero(spec)
    a, b = u.num, u.den
    g, s, t = b.xgcd(c_rest)
    if not g.is_one():
        raise RingMembershipError("denominator shares a factor with the non-invertible part")
    # a/b = a*s + (a*t/b)*c_rest
    quo, r = divmod(a * s, c_rest)
    v_rest = RatFunc(quo) + RatFunc(a * t, b)
    return v_rest / RatFunc(c_s), r


def expand_base_c(u: RatFunc, c: Poly, N: int, L: Localization):
    """``u = r_0 + r_1 c + ... + r_N c^N + v c^(N+1)``; returns ``([r_0..r_N], v)``."""
    if c.is_zero() or c.deg < 1:
        raise ValueError("base must be a nonconstant polynomial")
    digits = []
    cur = u
    for _ in range(N + 1):
        cur, r = divide_with_remainder(cur, c, L)
        digits.append(r)
    return digits, cur


def q_power_decomposition(g: RatFunc, s: int):
    """Components ``g_0..g_{q-1}`` with ``g = sum_i g_i^q z^i``, ``q = p^s``."""
    spec = g.spec
    q = spec.p ** s
    if q == 1:
        return [g]
    if g.is_zero():
        return [RatFunc.zero(spec) for _ in range(q)]
    num = g.num * (g.den ** (q - 1))
    out = []
    for i in range(q):
        part = num.c[i::q]
        A = Poly._raw(spec, part.copy())
        root = A.frob_coeffs(-s)
        out.append(RatFunc(root, g.den))
    return out


def recombine_q_power(parts, s: int) -> RatFunc:
    spec = parts[0].spec
    acc = RatFunc.zero(spec)
    for i, gi in enumerate(parts):
        acc = acc + gi.frobenius_power(s) * RatFunc(Poly.monomial(spec, i))
    return acc


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


class ParseError(ValueError):
    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else f"{msg} at position {pos}")
        self.pos = pos


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ParseError("bad character", pos)
        if mt.group(1) is not None:
            out.append(("int", int(mt.group(1)), mt.start(1)))
        elif mt.group(2) is not None:
            out.append(("name", mt.group(2), mt.start(2)))
        else:
            out.append(("op", mt.group(3), mt.start(3)))
        pos = mt.end()
    return out


class _ExprParser:
    """Recursive descent over + - * / ^ with symbols ``z`` and ``t``."""

    def __init__(self, text, spec, allow_div=True):
        self.toks = _tokenize(text)
        self.i = 0
        self.spec = spec
        self.allow_div = allow_div

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(f"expected {op!r}", tok[2])

    def parse(self):
        val = self.expr()
        if self.peek()[0] != "eof":
            raise ParseError("trailing input", self.peek()[2])
        return val

    def expr(self):
        neg = False
        if self.peek()[:2] == ("op", "-"):
            self.take()
            neg = True
        val = self.term()
        if neg:
            val = -val
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.power()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                rhs = self.power()
                if tok[1] == "*":
                    val = val * rhs
                else:
                    if not self.allow_div:
                        raise ParseError("division not allowed here", tok[2])
                    val = val / rhs
            elif tok[0] in ("name", "int") or tok[:2] == ("op", "("):
                val = val * self.power()  # implicit multiplication
            else:
                return val

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "int":
                raise ParseError("exponent must be an integer", tok[2])
            return base ** tok[1]
        return base

    def atom(self):
        tok = self.take()
        spec = self.spec
        if tok[0] == "int":
            return RatFunc.const(spec, tok[1])
        if tok[0] == "name":
            if tok[1] == "z":
                return RatFunc.z(spec)
            if tok[1] == "t":
                if spec.m == 1:
                    raise ParseError("symbol 't' needs an extension field (m > 1)", tok[2])
                return RatFunc.const(spec, spec.generator())
            raise ParseError(f"unknown symbol {tok[1]!r}", tok[2])
        if tok[:2] == ("op", "("):
            val = self.expr()
            self.expect(")")
            return val
        raise ParseError("unexpected token", tok[2])


def parse_ratfunc(text: str, spec: FieldSpec) -> RatFunc:
    return _ExprParser(text, spec).parse()


def parse_poly(text: str, spec: FieldSpec) -> Poly:
    val = _ExprParser(text, spec).parse()
    if not val.is_poly():
        raise ParseError(f"{text!r} is not a polynomial")
    return val.num
