"""Additive polynomials with F_p[z] coefficients, bounded terms and proper transformations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .gf import FieldElem, FieldSpec
from .poly import Poly
from .ratfun import ParseError, RatFunc, as_ratfunc, parse_poly

R_SORT = "R"
F_SORT = "F"


@dataclass(frozen=True, order=True)
class Var:
    name: str
    sort: str = R_SORT

    def __post_init__(self):
        if self.sort not in (R_SORT, F_SORT):
            raise ValueError(f"unknown sort {self.sort!r}")

    def __str__(self):
        return self.name


def rvar(name):
    return Var(name, R_SORT)


def fvar(name):
    return Var(name, F_SORT)


def _trim_coeffs(cs):
    cs = list(cs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return tuple(cs)


class AdditivePoly:
    """``sum_v sum_k a_{v,k} v^(p^k)`` with every ``a_{v,k}`` in F_p[z].

    ``spec`` is the working field F; coefficients are stored over F_p.
    ``vars`` fixes the variable order; a listed variable may have no terms.
    """

    __slots__ = ("spec", "vars", "coeffs", "_hash")

    def __init__(self, spec: FieldSpec, terms=None, vars=None):
        self.spec = spec
        base = spec.prime_field()
        terms = dict(terms or {})
        clean = {}
        for v, cs in terms.items():
            if not isinstance(v, Var):
                raise TypeError("variables must be Var instances")
            fixed = []
            for c in cs:
                if isinstance(c, int):
                    c = Poly.constant(base, c)
                if c.spec != base:
                    if not c.is_over_prime_field():
                        raise ValueError("additive coefficients must lie in F_p[z]")
                    c = c.change_field(base)
                fixed.append(c)
            fixed = _trim_coeffs(fixed)
            if fixed:
                clean[v] = fixed
        if vars is None:
            vars = sorted(clean, key=lambda v: (v.sort != R_SORT, _natural(v.name)))
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ValueError("duplicate variables")
        missing = [v for v in clean if v not in vars]
        if missing:
            raise ValueError(f"terms for unlisted variables {missing}")
        self.vars = vars
        self.coeffs = clean
        self._hash = None

    # -- accessors
    @property
    def p(self):
        return self.spec.p

    @property
    def base(self) -> FieldSpec:
        return self.spec.prime_field()

    @property
    def n(self) -> int:
        return len(self.vars)

    def coeff_list(self, v: Var) -> tuple:
        return self.coeffs.get(v, ())

    def coeff(self, v: Var, k: int) -> Poly:
        cs = self.coeffs.get(v, ())
        return cs[k] if k < len(cs) else Poly.zero(self.base)

    def s(self, v: Var) -> int:
        """Exponent index of the top power of ``v`` (-1 if ``v`` does not occur)."""
        return len(self.coeffs.get(v, ())) - 1

    def lead(self, v: Var) -> Poly:
        cs = self.coeffs.get(v, ())
        return cs[-1] if cs else Poly.zero(self.base)

    def rvars(self):
        return tuple(v for v in self.vars if v.sort == R_SORT)

    def fvars(self):
        return tuple(v for v in self.vars if v.sort == F_SORT)

    def is_zero(self):
        return not self.coeffs

    def has_all_variables(self) -> bool:
        return all(v in self.coeffs for v in self.vars)

    def degree(self) -> int:
        if not self.coeffs:
            return 0
        return self.p ** max(len(cs) - 1 for cs in self.coeffs.values())

    def max_s(self) -> int:
        return max((len(cs) - 1 for cs in self.coeffs.values()), default=-1)

    def coeff_degree(self) -> int:
        return max((c.deg for cs in self.coeffs.values() for c in cs), default=-1)

    # -- algebra
    def with_vars(self, vars) -> "AdditivePoly":
        return AdditivePoly(self.spec, self.coeffs, vars)

    def _merged_vars(self, other):
        out = list(self.vars)
        out += [v for v in other.vars if v not in self.vars]
        return out

    def __add__(self, other):
        if not isinstance(other, AdditivePoly):
            return NotImplemented
        terms = {v: list(cs) for v, cs in self.coeffs.items()}
        for v, cs in other.coeffs.items():
            cur = terms.setdefault(v, [])
            for k, c in enumerate(cs):
                if k < len(cur):
                    cur[k] = cur[k] + c
                else:
                    cur.append(c)
        return AdditivePoly(self.spec, terms, self._merged_vars(other))

    def __neg__(self):
        return AdditivePoly(self.spec, {v: [-c for c in cs] for v, cs in self.coeffs.items()}, self.vars)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Poly) -> "AdditivePoly":
        """Multiply by an F_p[z] element."""
        if isinstance(c, int):
            c = Poly.constant(self.base, c)
        c = c.change_field(self.base)
        return AdditivePoly(self.spec, {v: [a * c for a in cs] for v, cs in self.coeffs.items()}, self.vars)

    def frobenius(self, k: int = 1) -> "AdditivePoly":
        """The additive polynomial ``f^(p^k)``."""
        pk = self.p ** k
        return AdditivePoly(
            self.spec,
            {v: [Poly.zero(self.base)] * k + [a.subs_power(pk) for a in cs] for v, cs in self.coeffs.items()},
            self.vars,
        )

    def restrict(self, vars) -> "AdditivePoly":
        vars = tuple(vars)
        return AdditivePoly(self.spec, {v: cs for v, cs in self.coeffs.items() if v in vars}, vars)

    def r_part(self):
        return self.restrict(self.rvars())

    def f_part(self):
        return self.restrict(self.fvars())

    def rename(self, mapping) -> "AdditivePoly":
        return AdditivePoly(
            self.spec,
            {mapping.get(v, v): cs for v, cs in self.coeffs.items()},
            [mapping.get(v, v) for v in self.vars],
        )

    def __eq__(self, other):
        if not isinstance(other, AdditivePoly):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def same_as(self, other) -> bool:
        """Equality including the declared variable list."""
        return self == other and self.vars == other.vars

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, tuple(sorted(self.coeffs.items()))))
        return self._hash

    def __repr__(self):
        return f"AdditivePoly({self})"

    def __str__(self):
        return format_additive(self)

    # -- evaluation
    def __call__(self, *args, **kw):
        return eval_additive(self, *args, **kw)


def _natural(name):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def monomial(spec: FieldSpec, v: Var, k: int = 0, coeff=1) -> AdditivePoly:
    """``coeff * v^(p^k)``."""
    base = spec.prime_field()
    c = coeff if isinstance(coeff, Poly) else Poly.constant(base, coeff)
    return AdditivePoly(spec, {v: [Poly.zero(base)] * k + [c]}, [v])


def linear_form(spec: FieldSpec, items, vars=None) -> AdditivePoly:
    """Sum of ``coeff * v^(p^k)`` for ``(v, k, coeff)`` in items."""
    acc = AdditivePoly(spec, {}, [])
    for v, k, c in items:
        acc = acc + monomial(spec, v, k, c)
    return acc if vars is None else acc.with_vars(vars)


def _value(spec, x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x if x.spec == spec else x.change_field(spec)
    if isinstance(x, Poly):
        return RatFunc(x if x.spec == spec else x.change_field(spec), _reduced=True)
    if isinstance(x, (int, FieldElem)):
        return RatFunc.const(spec, x)
    raise TypeError(f"cannot evaluate at {x!r}")


def eval_additive(f: AdditivePoly, x=None, fvals=None) -> RatFunc:
    """Value of f.  ``x`` is a mapping Var -> value, or a sequence aligned with ``f.vars``.

    With ``fvals`` given, ``x`` is aligned with the R-variables and ``fvals`` with the F-variables.
    """
    spec = f.spec
    if isinstance(x, dict):
        env = x
    else:
        x = tuple(x or ())
        if fvals is not None:
            rv, fv = f.rvars(), f.fvars()
            if len(x) != len(rv) or len(fvals) != len(fv):
                raise ValueError("arity mismatch")
            env = dict(zip(rv, x))
            env.update(zip(fv, fvals))
        else:
            if len(x) != f.n:
                raise ValueError(f"expected {f.n} values, got {len(x)}")
            env = dict(zip(f.vars, x))
    acc = RatFunc.zero(spec)
    for v, cs in f.coeffs.items():
        if v not in env:
            raise KeyError(f"no value for {v}")
        val = _value(spec, env[v])
        if val.is_zero():
            continue
        power = val
        for k, c in enumerate(cs):
            if k:
                power = power.frobenius_power(1)
            if not c.is_zero():
                acc = acc + power * RatFunc(c.change_field(spec), _reduced=True)
    return acc


def compose_additive(f: AdditivePoly, subs: dict, vars=None) -> AdditivePoly:
    """Substitute additive polynomials for variables of f (others are kept)."""
    spec = f.spec
    acc = AdditivePoly(spec, {}, [])
    for v in f.vars:
        cs = f.coeffs.get(v, ())
        g = subs.get(v)
        if g is None:
            acc = acc + AdditivePoly(spec, {v: cs}, [v])
            continue
        if not isinstance(g, AdditivePoly):
            raise TypeError("substitutions must be additive polynomials")
        if g.spec != spec:
            raise ValueError("field mismatch in composition")
        for k, a in enumerate(cs):
            if a.is_zero():
                continue
            acc = acc + g.frobenius(k).scale(a)
        acc = acc + AdditivePoly(spec, {}, g.vars)
    out_vars = vars
    if out_vars is None:
        out_vars = []
        for v in f.vars:
            for w in (subs[v].vars if v in subs else (v,)):
                if w not in out_vars:
                    out_vars.append(w)
        out_vars += [w for w in acc.vars if w not in out_vars]
    return AdditivePoly(spec, acc.coeffs, out_vars)


@dataclass(frozen=True)
class Classification:
    plain: bool
    normalized: bool
    p_basic: bool
    strongly_normalized: bool
    s: int

    def flags(self):
        out = ["plain"] if self.plain else []
        out += [k for k in ("normalized", "p_basic", "strongly_normalized") if getattr(self, k)]
        return out


def classify(f: AdditivePoly) -> Classification:
    """Structural flags of f taken over its R-variables."""
    from .independence import is_independent

    rv = [v for v in f.rvars()]
    if not rv or any(v not in f.coeffs for v in rv):
        return Classification(True, False, False, False, f.max_s())
    ss = {f.s(v) for v in rv}
    s = max(ss)
    if len(ss) != 1:
        return Classification(True, False, False, False, s)
    q = f.p ** s
    leads = [RatFunc(f.lead(v)) for v in rv]
    normalized = len(rv) <= q and is_independent(leads, s)
    p_basic = normalized and len(rv) == q
    residues = [f.lead(v).deg % q for v in rv]
    strong = normalized and len(set(residues)) == len(residues)
    return Classification(True, normalized, p_basic, strong, s)


def p_free_family(f: AdditivePoly, vars=None):
    """``{b_i z^(j p^(s_i))}`` for ``0 <= j < p^(s - s_i)`` and the matching (var, j) labels."""
    vars = f.rvars() if vars is None else vars
    s = max(f.s(v) for v in vars)
    fam, labels = [], []
    for v in vars:
        si = f.s(v)
        b = f.lead(v)
        step = f.p ** si
        for j in range(f.p ** (s - si)):
            fam.append(RatFunc(b.shift(j * step)))
            labels.append((v, j))
    return fam, labels, s


def is_p_free(f: AdditivePoly) -> bool:
    from .independence import is_independent

    vars = f.rvars()
    if not vars or any(v not in f.coeffs for v in vars):
        return False
    fam, _, s = p_free_family(f, vars)
    return len(fam) <= f.p ** s and is_independent(fam, s)


# ---------------------------------------------------------------------------
# bounded terms

@dataclass(frozen=True)
class BoundedTerm:
    """``(1/e^N) * G(alpha)`` with G additive in F-variables."""

    e: Poly
    N: int
    G: AdditivePoly

    def __post_init__(self):
        if self.e.is_zero():
            raise ValueError("e must be nonzero")
        if any(v.sort != F_SORT for v in self.G.coeffs):
            raise ValueError("G may only involve F-variables")

    def evaluate(self, alpha) -> RatFunc:
        spec = self.G.spec
        val = eval_additive(self.G, alpha)
        return val / RatFunc(self.e.change_field(spec)) ** self.N


# ---------------------------------------------------------------------------
# proper transformations

class WitnessError(RuntimeError):
    """A witness builder produced a point that does not map to the target."""


class ProperTransformation:
    """Tuple of additive polynomials with a constructive right inverse.

    ``components[i]`` expresses target variable ``targets[i]`` in terms of the
    domain R-variables ``rvars`` and F-variables ``fvars``.  ``witness`` maps a
    target tuple to ``(rvals, fvals)``.
    """

    __slots__ = ("spec", "targets", "rvars", "fvars", "components", "_witness")

    def __init__(self, spec, targets, rvars, fvars, components, witness: Callable):
        if witness is None:
            raise ValueError("a proper transformation needs a witness builder")
        self.spec = spec
        self.targets = tuple(targets)
        self.rvars = tuple(rvars)
        self.fvars = tuple(fvars)
        self.components = tuple(c.with_vars(self.rvars + self.fvars) for c in components)
        if len(self.components) != len(self.targets):
            raise ValueError("one component per target variable")
        self._witness = witness

    @classmethod
    def identity(cls, spec, vars):
        vars = tuple(vars)
        comps = [monomial(spec, v) for v in vars]
        return cls(spec, vars, vars, (), comps, lambda target: (tuple(target), ()))

    def as_subs(self) -> dict:
        return dict(zip(self.targets, self.components))

    def apply(self, rvals, fvals=()) -> tuple:
        env = dict(zip(self.rvars, rvals))
        env.update(zip(self.fvars, fvals))
        if len(rvals) != len(self.rvars) or len(fvals) != len(self.fvars):
            raise ValueError("arity mismatch")
        return tuple(eval_additive(c, env) for c in self.components)

    def preimage(self, target, check=True):
        target = tuple(as_ratfunc(t, self.spec) for t in target)
        if len(target) != len(self.targets):
            raise ValueError("arity mismatch")
        rvals, fvals = self._witness(target)
        rvals, fvals = tuple(rvals), tuple(fvals)
        if check and self.apply(rvals, fvals) != target:
            raise WitnessError("witness does not reproduce the target")
        return rvals, fvals

    def then(self, inner: "ProperTransformation") -> "ProperTransformation":
        """``self`` after substituting ``inner`` for the R-variables of ``self``."""
        if set(inner.targets) != set(self.rvars):
            raise ValueError("inner targets must be the outer R-variables")
        subs = inner.as_subs()
        rvars = inner.rvars
        fvars = inner.fvars + tuple(v for v in self.fvars if v not in inner.fvars)
        comps = [compose_additive(c, subs) for c in self.components]
        outer_w, inner_w = self._witness, inner._witness
        order = [inner.targets.index(v) for v in self.rvars]

        def witness(target):
            mid, fo = outer_w(target)
            mid_by_target = [None] * len(inner.targets)
            for pos, val in zip(order, mid):
                mid_by_target[pos] = val
            rv, fi = inner_w(tuple(mid_by_target))
            fo_map = dict(zip(self.fvars, fo))
            fi_map = dict(zip(inner.fvars, fi))
            fi_map.update({k: v for k, v in fo_map.items() if k not in fi_map})
            return rv, tuple(fi_map[v] for v in fvars)

        return ProperTransformation(self.spec, self.targets, rvars, fvars, comps, witness)

    def __repr__(self):
        body = ", ".join(f"{t} = {c}" for t, c in zip(self.targets, self.components))
        return f"ProperTransformation({body})"


def apply_proper(xi: ProperTransformation, rvals, fvals=()):
    return xi.apply(rvals, fvals)


def preimage(xi: ProperTransformation, target):
    return xi.preimage(target)


# ---------------------------------------------------------------------------
# text syntax

_ADD_TOKEN = re.compile(r"\s*(poly\{[^}]*\}|\d+|[A-Za-z_]\w*|\S)")


def _is_p_power(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k if n == 1 else None


def parse_additive(text: str, spec: FieldSpec, fvar_prefixes=("a",)) -> AdditivePoly:
    """Parse ``poly{z}*x1^2 + x1 + poly{1+z}*a1``; names starting with ``a`` are F-variables."""
    base = spec.prime_field()
    toks = _ADD_TOKEN.findall(text.strip())
    i = 0
    acc = AdditivePoly(spec, {}, [])
    order = []
    sign = 1
    expect_term = True
    if not toks:
        raise ParseError("empty additive polynomial")
    while i < len(toks):
        tok = toks[i]
        if tok in "+-" and len(tok) == 1:
            if tok == "-":
                sign = -sign
            i += 1
            expect_term = True
            continue
        if not expect_term:
            raise ParseError(f"expected '+' or '-' before {tok!r}")
        coeff = Poly.one(base)
        if tok.startswith("poly{") or tok.isdigit():
            coeff = parse_poly(tok[5:-1], base) if tok.startswith("poly{") else Poly.constant(base, int(tok))
            i += 1
            if i >= len(toks) or toks[i] != "*":
                raise ParseError("constant terms are not additive")
            i += 1
            tok = toks[i] if i < len(toks) else ""
        if not re.fullmatch(r"[A-Za-z_]\w*", tok or "") or tok == "poly":
            raise ParseError(f"expected a variable, got {tok!r}")
        sort = F_SORT if tok.startswith(tuple(fvar_prefixes)) else R_SORT
        v = Var(tok, sort)
        i += 1
        k = 0
        if i < len(toks) and toks[i] == "^":
            if i + 1 >= len(toks) or not toks[i + 1].isdigit():
                raise ParseError("exponent must be an integer")
            k = _is_p_power(int(toks[i + 1]), spec.p)
            if k is None:
                raise ParseError(f"exponent {toks[i + 1]} is not a power of {spec.p}")
            i += 2
        if v not in order:
            order.append(v)
        acc = acc + monomial(spec, v, k, coeff if sign == 1 else -coeff)
        sign = 1
        expect_term = False
    if expect_term:
        raise ParseError("dangling operator")
    return acc.with_vars(order)


def format_additive(f: AdditivePoly) -> str:
    parts = []
    for v in f.vars:
        cs = f.coeffs.get(v, ())
        for k in range(len(cs) - 1, -1, -1):
            c = cs[k]
            if c.is_zero():
                continue
            mon = v.name if k == 0 else f"{v.name}^{f.p ** k}"
            if c.is_one():
                parts.append(mon)
            elif c.deg == 0:
                parts.append(f"{int(c.c[0])}*{mon}")
            else:
                parts.append(f"poly{{{c}}}*{mon}")
    return " + ".join(parts) if parts else "0"
