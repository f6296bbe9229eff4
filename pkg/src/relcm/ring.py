"""Graded polynomial rings and exact multivariate polynomials."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .field import Field, QQ

ORDERS = ("grevlex", "lex")


class RingMismatchError(ValueError):
    pass


class ParseError(ValueError):
    """Raised for malformed polynomial text; carries a 1-based line/column."""

    def __init__(self, msg, line=1, col=1):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.msg = msg
        self.line = line
        self.col = col


class RingContext:
    """Polynomial ring k[x_1..x_n] with a monomial order and positive grading.

    A quotient ring S/J is modelled by ``defining_ideal``: every ideal and
    module over the quotient is stored through its preimage in S.
    """

    def __init__(self, variables: Sequence[str], characteristic: int = 0,
                 order: str = "grevlex", weights: Sequence[int] | None = None,
                 defining_ideal: Iterable = ()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ValueError(f"bad variable name {v!r}")
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        weights = tuple(weights) if weights is not None else (1,) * len(variables)
        if len(weights) != len(variables) or any(int(w) != w or w <= 0 for w in weights):
            raise ValueError("grading weights must be positive integers, one per variable")
        self.variables = variables
        self.field = characteristic if isinstance(characteristic, Field) else Field(characteristic)
        self.characteristic = self.field.characteristic
        self.order = order
        self.weights = tuple(int(w) for w in weights)
        self.n = len(variables)
        self.key = (variables, self.characteristic, order, self.weights)
        self._zero_exp = (0,) * self.n
        self._mkey_cache: dict = {}
        if order == "grevlex":
            w = self.weights

            def mkey(e):
                return (sum(a * b for a, b in zip(w, e)), tuple(-a for a in reversed(e)))
        else:
            def mkey(e):
                return e
        self._mkey_raw = mkey
        J = []
        for g in defining_ideal:
            g = self.coerce(g)
            if not g.is_zero():
                if not g.is_homogeneous():
                    raise ValueError("defining ideal generators must be homogeneous")
                J.append(Poly(self, g.terms))
        self.defining_ideal = tuple(J)

    # -- basic structure -------------------------------------------------
    def monomial_key(self, e):
        k = self._mkey_cache.get(e)
        if k is None:
            k = self._mkey_raw(e)
            self._mkey_cache[e] = k
        return k

    def degree_of(self, e) -> int:
        return sum(a * b for a, b in zip(self.weights, e))

    @property
    def zero_exp(self):
        return self._zero_exp

    @property
    def gens(self):
        out = []
        for i in range(self.n):
            e = [0] * self.n
            e[i] = 1
            out.append(Poly(self, {tuple(e): self.field.one}))
        return out

    def var(self, name: str) -> "Poly":
        return self.gens[self.variables.index(name)]

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = self.field(c)
        return Poly(self, {self._zero_exp: c} if c != 0 else {})

    def monomial(self, e, c=1) -> "Poly":
        return Poly(self, {tuple(e): self.field(c)})

    def is_standard_grading(self) -> bool:
        return all(w == 1 for w in self.weights)

    def is_quotient(self) -> bool:
        return bool(self.defining_ideal)

    def same_ambient(self, other: "RingContext") -> bool:
        return self.key == other.key

    def check(self, other: "RingContext"):
        if not self.same_ambient(other):
            raise RingMismatchError("operands live in different rings")

    def quotient(self, gens) -> "RingContext":
        """The ring S/J (J together with any existing defining ideal)."""
        r = RingContext(self.variables, self.field, self.order, self.weights,
                        list(self.defining_ideal) + [self.coerce(g) for g in gens])
        return r

    def ambient(self) -> "RingContext":
        if not self.defining_ideal:
            return self
        return RingContext(self.variables, self.field, self.order, self.weights)

    def with_order(self, order: str) -> "RingContext":
        return RingContext(self.variables, self.field, order, self.weights, self.defining_ideal)

    def extended(self, name: str, weight: int = 1) -> "RingContext":
        """Ring with one extra variable appended (ordered last)."""
        if name in self.variables:
            raise ValueError(f"variable {name} already present")
        return RingContext(self.variables + (name,), self.field, self.order, self.weights + (weight,))

    def embed(self, f: "Poly", target: "RingContext") -> "Poly":
        """Map ``f`` into a ring whose variable list extends ours."""
        pad = target.n - self.n
        return Poly(target, {e + (0,) * pad: c for e, c in f.terms.items()})

    def coerce(self, f) -> "Poly":
        if isinstance(f, Poly):
            self.check(f.ring)
            return f
        if isinstance(f, str):
            return self.parse(f)
        if isinstance(f, (int, Fraction)):
            return self.const(f)
        return self.const(f)

    def parse(self, text: str, env: Mapping[str, "Poly"] | None = None) -> "Poly":
        return parse_poly(text, self, env)

    def __call__(self, text) -> "Poly":
        return self.coerce(text)

    def __eq__(self, other):
        return (isinstance(other, RingContext) and self.key == other.key
                and set(self.defining_ideal) == set(other.defining_ideal))

    def __hash__(self):
        return hash((self.key, frozenset(self.defining_ideal)))

    def describe(self) -> str:
        k = "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"
        s = f"{k}[{','.join(self.variables)}] {self.order}"
        if not self.is_standard_grading():
            s += " weights (" + ",".join(map(str, self.weights)) + ")"
        if self.defining_ideal:
            s += " mod <" + ", ".join(map(str, self.defining_ideal)) + ">"
        return s

    def __repr__(self):
        return f"RingContext({self.describe()})"


def _eadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Immutable exact polynomial: a map from exponent tuples to nonzero scalars."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingContext, terms: Mapping):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c != 0}
        self._hash = None

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self) -> int:
        """Largest weighted degree of a term (-1 for zero)."""
        if not self.terms:
            return -1
        return max(self.ring.degree_of(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({self.ring.degree_of(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.ring, {e: c for e, c in self.terms.items() if self.ring.degree_of(e) == d})

    def lead(self):
        """(exponent, coefficient) of the leading term."""
        e = max(self.terms, key=self.ring.monomial_key)
        return e, self.terms[e]

    def lead_exp(self):
        return self.lead()[0]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.monomial_key(t[0]), reverse=True)

    def constant_term(self):
        return self.terms.get(self.ring.zero_exp, self.ring.field.zero)

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        c = self.lead()[1]
        return Poly(self.ring, {e: v / c for e, v in self.terms.items()})

    def support_vars(self):
        s = set()
        for e in self.terms:
            s.update(i for i, a in enumerate(e) if a)
        return s

    # -- arithmetic -------------------------------------------------------
    def _other(self, o) -> "Poly":
        if isinstance(o, Poly):
            self.ring.check(o.ring)
            return o
        return self.ring.const(o)

    def __add__(self, o):
        o = self._other(o)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) - self

    def __mul__(self, o):
        if not isinstance(o, Poly):
            c = self.ring.field(o)
            return Poly(self.ring, {e: v * c for e, v in self.terms.items()})
        self.ring.check(o.ring)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = _eadd(e1, e2)
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        r = self.ring.one()
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __truediv__(self, c):
        c = self.ring.field(c)
        return Poly(self.ring, {e: v / c for e, v in self.terms.items()})

    def __eq__(self, o):
        if isinstance(o, Poly):
            return self.ring.key == o.ring.key and self.terms == o.terms
        if isinstance(o, (int, Fraction)):
            return self == self.ring.const(o)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.key, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        fld = self.ring.field
        out = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                (v if a == 1 else f"{v}^{a}") for v, a in zip(self.ring.variables, e) if a)
            cs = fld.to_str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if mon:
                body = mon if cs == "1" else f"{cs}*{mon}"
            else:
                body = cs
            if "/" in cs and mon:
                body = f"({cs})*{mon}"
            out.append(("-" if neg else "+", body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Poly({self})"


# -- expression parser -----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text, line0=1, col0=1):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            line, col = _locate(text, pos, line0, col0)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        val = m.group(m.lastindex)
        if val == "**":
            val = "^"
        toks.append((kind, val, start))
        pos = m.end()
    return toks


def _locate(text, pos, line0, col0):
    before = text[:pos]
    nl = before.count("\n")
    if nl:
        return line0 + nl, pos - before.rfind("\n")
    return line0, col0 + pos


class _Parser:
    def __init__(self, text, ring, env, line0, col0):
        self.text = text
        self.ring = ring
        self.env = env or {}
        self.toks = _tokenize(text, line0, col0)
        self.i = 0
        self.line0 = line0
        self.col0 = col0

    def err(self, msg, tok=None):
        pos = tok[2] if tok else len(self.text)
        line, col = _locate(self.text, pos, self.line0, self.col0)
        raise ParseError(msg, line, col)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        if not self.toks:
            self.err("empty expression")
        v = self.expr()
        if self.peek() is not None:
            self.err(f"unexpected token {self.peek()[1]!r}", self.peek())
        return v

    def expr(self):
        t = self.peek()
        sign = 1
        if t and t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        v = self.term()
        if sign < 0:
            v = -v
        while True:
            t = self.peek()
            if t and t[0] == "op" and t[1] in "+-":
                self.take()
                w = self.term()
                v = v + w if t[1] == "+" else v - w
            else:
                return v

    def term(self):
        v = self.factor()
        while True:
            t = self.peek()
            if t and t[0] == "op" and t[1] == "*":
                self.take()
                v = v * self.factor()
            elif t and t[0] == "op" and t[1] == "/":
                self.take()
                d = self.factor()
                if not d.is_constant() or d.is_zero():
                    self.err("division only by nonzero constants", t)
                v = v / d.constant_term()
            else:
                return v

    def factor(self):
        base = self.atom()
        t = self.peek()
        if t and t[0] == "op" and t[1] == "^":
            self.take()
            nt = self.take()
            if nt is None or nt[0] != "num":
                self.err("exponent must be a non-negative integer", nt)
            return base ** int(nt[1])
        return base

    def atom(self):
        t = self.take()
        if t is None:
            self.err("unexpected end of expression")
        kind, val, _ = t
        if kind == "num":
            return self.ring.const(int(val))
        if kind == "name":
            if val in self.env:
                return self.env[val]
            if val in self.ring.variables:
                return self.ring.var(val)
            self.err(f"unknown variable {val!r}", t)
        if val == "(":
            v = self.expr()
            c = self.take()
            if c is None or c[1] != ")":
                self.err("missing ')'", c)
            return v
        if val == "-":
            return -self.factor()
        self.err(f"unexpected token {val!r}", t)


def parse_poly(text: str, ring: RingContext, env=None, line=1, col=1) -> Poly:
    """Parse ``text`` (``+ - * / ^`` and parentheses) into a polynomial of ``ring``."""
    return _Parser(text, ring, env, line, col).parse()


def polynomial_ring(spec: str, characteristic: int = 0, order: str = "grevlex", weights=None) -> RingContext:
    """Shorthand: ``polynomial_ring("x,y,z")``."""
    names = [s.strip() for s in spec.replace(" ", ",").split(",") if s.strip()]
    return RingContext(names, characteristic, order, weights)
