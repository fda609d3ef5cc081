"""Text syntax for formulas.

Sorts are written at binders (``exists x:R (...)``, ``forall a:F (...)``);
free variables are R-sorted unless annotated ``a:F``.  Terms use ``+``, ``-``,
``frob(t)`` or ``t^N`` (N a power of p, or the letter ``p``), ``z*t``,
``poly{...}*t`` and integer multiples.  Atoms are ``t = t``, ``t != t``,
``inF(t)`` and ``P{a, b : sigma}(t1, t2)``; connectives ``not and or ->``.
Inside ``P{...}`` and in L_p mode every variable is F-sorted and binders may
omit the sort.
"""

from __future__ import annotations

import re

from ..additive import F_SORT, R_SORT, Var
from ..gf import FieldSpec
from ..poly import Poly
from ..ratfun import ParseError, parse_poly
from .ast import (
    And,
    Eq,
    Exists,
    Forall,
    FormulaSortError,
    Implies,
    InF,
    Not,
    Or,
    Pred,
    TAdd,
    TConst,
    TFrob,
    TMul,
    TNeg,
    TVar,
    free_vars,
)

KEYWORDS = {"exists", "forall", "and", "or", "not", "true", "false", "inF", "frob", "P", "z", "p", "R", "F"}

_TOKEN = re.compile(r"\s*(?:(poly\{[^}]*\})|(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(->|!=|[()\{\},:+\-*^=]))")


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos

    def __repr__(self):
        return f"{self.text!r}@{self.pos}"


def _tokenize(text: str):
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos}")
        kind = ("poly", "num", "ident", "sym")[m.lastindex - 1]
        out.append(_Tok(kind, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Backtrack(Exception):
    pass


class _Parser:
    def __init__(self, text, spec: FieldSpec, lp: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.spec = spec
        self.base = spec.prime_field()
        self.scopes = []  # list of dict name -> Var
        self.free = {}
        self.lp_depth = 1 if lp else 0

    # -- helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise ParseError(f"{msg} at position {tok.pos}")

    def accept(self, text):
        if self.tok.text == text and self.tok.kind in ("sym", "ident"):
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.error(f"expected {text!r}, got {self.tok.text!r}")

    def lookup(self, name, sort_hint, tok):
        for scope in reversed(self.scopes):
            if name in scope:
                v = scope[name]
                if sort_hint and sort_hint != v.sort:
                    self.error(f"variable {name} is {v.sort}-sorted", tok)
                return v
        if self.lp_depth:
            if sort_hint == R_SORT:
                self.error("L_p variables are F-sorted", tok)
            sort_hint = F_SORT
        if name in self.free:
            v = self.free[name]
            if sort_hint and sort_hint != v.sort:
                self.error(f"variable {name} is {v.sort}-sorted", tok)
            return v
        v = Var(name, sort_hint or R_SORT)
        self.free[name] = v
        return v

    # -- formulas
    def parse_formula(self):
        lhs = self.disjunction()
        if self.accept("->"):
            return Implies(lhs, self.parse_formula())
        return lhs

    def disjunction(self):
        args = [self.conjunction()]
        while self.accept("or"):
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self):
        args = [self.unary()]
        while self.accept("and"):
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self):
        if self.accept("not"):
            return Not(self.unary())
        if self.tok.text in ("exists", "forall") and self.tok.kind == "ident":
            return self.quantifier()
        return self.primary()

    def binder(self):
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.error("expected a variable name")
        self.i += 1
        sort = None
        if self.accept(":"):
            s = self.tok.text
            if s not in ("R", "F"):
                self.error("sort must be R or F")
            self.i += 1
            sort = R_SORT if s == "R" else F_SORT
        if self.lp_depth:
            if sort == R_SORT:
                self.error("L_p quantifiers range over F", tok)
            sort = F_SORT
        if sort is None:
            self.error("binder needs a sort (x:R or a:F)", tok)
        return Var(tok.text, sort)

    def quantifier(self):
        kind = self.tok.text
        self.i += 1
        vars = [self.binder()]
        while self.accept(","):
            vars.append(self.binder())
        self.scopes.append({v.name: v for v in vars})
        if self.tok.text in ("exists", "forall"):
            body = self.quantifier()
        else:
            self.expect("(")
            body = self.parse_formula()
            self.expect(")")
        self.scopes.pop()
        cls = Exists if kind == "exists" else Forall
        for v in reversed(vars):
            body = cls(v, body)
        return body

    def primary(self):
        tok = self.tok
        if self.accept("true"):
            return And(())
        if self.accept("false"):
            return Or(())
        if tok.text == "inF" and tok.kind == "ident":
            if self.lp_depth:
                self.error("inF is not part of L_p")
            self.i += 1
            self.expect("(")
            t = self.term()
            self.expect(")")
            return InF(t)
        if tok.text == "P" and tok.kind == "ident":
            return self.predicate()
        save = self.i
        try:
            return self.comparison()
        except (_Backtrack, ParseError):
            self.i = save
            if self.accept("("):
                phi = self.parse_formula()
                self.expect(")")
                return phi
            self.i = save
            try:
                return self.comparison()
            except _Backtrack:
                self.error("expected '=' or '!='")

    def comparison(self):
        lhs = self.term()
        if self.accept("="):
            return Eq(lhs, self.term())
        if self.accept("!="):
            return Not(Eq(lhs, self.term()))
        raise _Backtrack()

    def predicate(self):
        if self.lp_depth:
            self.error("P atoms are not part of L_p")
        self.i += 1
        self.expect("{")
        # optional binder list "a, b :"
        j, names = self.i, []
        while self.toks[j].kind == "ident" and self.toks[j].text not in KEYWORDS:
            names.append(self.toks[j].text)
            if self.toks[j + 1].text == ",":
                j += 2
                continue
            break
        explicit = bool(names) and self.toks[j + 1].text == ":" and self.toks[j + 1].kind == "sym"
        if explicit:
            self.i = j + 2
        outer_scopes, outer_free = self.scopes, self.free
        self.scopes, self.free = [], {}
        self.lp_depth += 1
        if explicit:
            params = tuple(Var(n, F_SORT) for n in names)
            self.scopes.append({v.name: v for v in params})
        sigma = self.parse_formula()
        self.lp_depth -= 1
        if not explicit:
            params = tuple(self.free.values())
        elif self.free:
            self.error(f"free variables {sorted(self.free)} not among the parameters")
        self.scopes, self.free = outer_scopes, outer_free
        self.expect("}")
        self.expect("(")
        args = []
        if not self.accept(")"):
            args.append(self.term())
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
        try:
            return Pred(sigma, params, tuple(args))
        except FormulaSortError as exc:
            raise FormulaSortError(f"{exc} (at position {self.tok.pos})") from None

    # -- terms
    def term(self):
        args = [self.summand()]
        while self.tok.text in ("+", "-") and self.tok.kind == "sym":
            op = self.tok.text
            self.i += 1
            t = self.summand()
            args.append(t if op == "+" else TNeg(t))
        return args[0] if len(args) == 1 else TAdd(tuple(args))

    def summand(self):
        if self.accept("-"):
            return TNeg(self.summand())
        return self.factor()

    def factor(self):
        save = self.i
        c = self.coefficient()
        if c is not None and self.accept("*"):
            return TMul(c, self.factor())
        self.i = save
        return self.power()

    def coefficient(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Poly.constant(self.base, int(tok.text))
        if tok.kind == "poly":
            self.i += 1
            return parse_poly(tok.text[5:-1], self.base)
        if tok.kind == "ident" and tok.text == "z":
            self.i += 1
            return Poly.z(self.base)
        return None

    def power(self):
        t = self.atom()
        while self.accept("^"):
            tok = self.tok
            if tok.kind == "ident" and tok.text == "p":
                k = 1
            elif tok.kind == "num":
                n, k, p = int(tok.text), 0, self.spec.p
                while n % p == 0 and n > 1:
                    n //= p
                    k += 1
                if n != 1:
                    self.error(f"exponent {tok.text} is not a power of {p}")
            else:
                self.error("expected an exponent")
            self.i += 1
            if k:
                t = TFrob(t.arg, t.k + k) if isinstance(t, TFrob) else TFrob(t, k)
        return t

    def atom(self):
        tok = self.tok
        if tok.kind in ("num", "poly") or (tok.kind == "ident" and tok.text == "z"):
            return TConst(self.coefficient())
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        if tok.kind == "ident" and tok.text == "frob":
            self.i += 1
            self.expect("(")
            t = self.term()
            self.expect(")")
            return TFrob(t, 1)
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.i += 1
            hint = None
            if self.tok.text == ":" and self.toks[self.i + 1].text in ("R", "F"):
                hint = R_SORT if self.toks[self.i + 1].text == "R" else F_SORT
                self.i += 2
            return TVar(self.lookup(tok.text, hint, tok))
        self.error(f"unexpected {tok.text!r}")


def parse_formula(text: str, spec: FieldSpec):
    p = _Parser(text, spec, lp=False)
    phi = p.parse_formula()
    if p.tok.kind != "end":
        p.error(f"trailing input {p.tok.text!r}")
    return phi


def parse_sigma(text: str, spec: FieldSpec):
    """Parse an L_p formula (all variables F-sorted, sorts optional)."""
    p = _Parser(text, spec, lp=True)
    phi = p.parse_formula()
    if p.tok.kind != "end":
        p.error(f"trailing input {p.tok.text!r}")
    return phi


def parse_term(text: str, spec: FieldSpec):
    p = _Parser(text, spec, lp=False)
    t = p.term()
    if p.tok.kind != "end":
        p.error(f"trailing input {p.tok.text!r}")
    return t


# ---------------------------------------------------------------------------
# printing

def _const_str(c: Poly) -> str:
    if c.deg <= 0:
        return str(c.coeff(0).value) if c.deg == 0 else "0"
    if c.deg == 1 and c.is_monic() and c.coeff(0).value == 0:
        return "z"
    return "poly{" + c.to_str() + "}"


class _Printer:
    def __init__(self, p: int):
        self.p = p

    def term(self, t, bound, lp):
        if isinstance(t, TAdd):
            return " + ".join(self.summand(a, bound, lp) for a in t.args)
        return self.summand(t, bound, lp)

    def summand(self, t, bound, lp):
        if isinstance(t, TAdd):
            return "(" + self.term(t, bound, lp) + ")"
        if isinstance(t, TNeg):
            return "-" + self.summand(t.arg, bound, lp)
        return self.factor(t, bound, lp)

    def factor(self, t, bound, lp):
        if isinstance(t, TMul):
            inner = t.arg
            s = self.factor(inner, bound, lp) if not isinstance(inner, (TAdd, TNeg)) else "(" + self.term(inner, bound, lp) + ")"
            return _const_str(t.c) + "*" + s
        return self.power(t, bound, lp)

    def power(self, t, bound, lp):
        if isinstance(t, TFrob):
            inner = t.arg
            if isinstance(inner, (TVar, TConst)):
                base = self.atom(inner, bound, lp)
            else:
                base = "(" + self.term(inner, bound, lp) + ")"
            return f"{base}^{self.p ** t.k}"
        return self.atom(t, bound, lp)

    def atom(self, t, bound, lp):
        if isinstance(t, TVar):
            v = t.var
            if v in bound or lp or v.sort == R_SORT:
                return v.name
            return f"{v.name}:F"
        if isinstance(t, TConst):
            return _const_str(t.c)
        return "(" + self.term(t, bound, lp) + ")"

    # formulas: levels 0 implication, 1 or, 2 and, 3 unary
    def formula(self, phi, bound, lp, level=0):
        if isinstance(phi, Implies):
            s = self.formula(phi.lhs, bound, lp, 1) + " -> " + self.formula(phi.rhs, bound, lp, 0)
            return s if level == 0 else "(" + s + ")"
        if isinstance(phi, Or) and phi.args:
            s = " or ".join(self.formula(a, bound, lp, 2) for a in phi.args)
            return s if level <= 1 else "(" + s + ")"
        if isinstance(phi, And) and phi.args:
            s = " and ".join(self.formula(a, bound, lp, 3) for a in phi.args)
            return s if level <= 2 else "(" + s + ")"
        if isinstance(phi, (And, Or)) and not phi.args:
            return "true" if isinstance(phi, And) else "false"
        if isinstance(phi, Not):
            if isinstance(phi.arg, Eq):
                return self.term(phi.arg.lhs, bound, lp) + " != " + self.term(phi.arg.rhs, bound, lp)
            return "not " + self.formula(phi.arg, bound, lp, 3)
        if isinstance(phi, (Exists, Forall)):
            kw = "exists" if isinstance(phi, Exists) else "forall"
            v = phi.var
            sort = "" if lp else (":R" if v.sort == R_SORT else ":F")
            return f"{kw} {v.name}{sort} ({self.formula(phi.body, bound | {v}, lp, 0)})"
        if isinstance(phi, Eq):
            return self.term(phi.lhs, bound, lp) + " = " + self.term(phi.rhs, bound, lp)
        if isinstance(phi, InF):
            return "inF(" + self.term(phi.arg, bound, lp) + ")"
        if isinstance(phi, Pred):
            params = ", ".join(v.name for v in phi.params)
            sigma = self.formula(phi.sigma, frozenset(phi.params), True, 0)
            head = f"P{{{params} : {sigma}}}" if phi.params else f"P{{{sigma}}}"
            return head + "(" + ", ".join(self.term(a, bound, lp) for a in phi.args) + ")"
        raise TypeError(f"not a formula: {phi!r}")


def format_formula(phi, p: int) -> str:
    return _Printer(p).formula(phi, frozenset(), False)


def format_sigma(phi, p: int) -> str:
    return _Printer(p).formula(phi, frozenset(), True)


def format_term(t, p: int) -> str:
    return _Printer(p).term(t, frozenset(), False)


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())


__all__ = [
    "parse_formula",
    "parse_sigma",
    "parse_term",
    "format_formula",
    "format_sigma",
    "format_term",
    "normalize_whitespace",
    "free_vars",
]
