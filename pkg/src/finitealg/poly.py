"""Sparse polynomials in the dual ring S and the operator ring R.

S = Q[x1..xn] is where inverse systems live; R = Q[a1..an] acts on S by
contraction::

    a^u -| x^v = v!/(v-u)! * x^(v-u)   if v >= u, else 0

which is ordinary differentiation.  Coefficients are always stored in the
plain monomial basis.  Divided powers ``x^(k) = x^k / k!`` only exist in the
text syntax, where they are converted on parse.

Monomials are exponent tuples.  The monomial order is degrevlex with
x1 > x2 > ... > xn.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Iterable, Sequence

from .errors import DimensionMismatch, ParseError
from .exactalg import Subspace, as_fraction

Monomial = tuple


# ---------------------------------------------------------------- monomials

def degrevlex_key(m: Monomial):
    """Sort key: ascending key means ascending in degrevlex."""
    return (sum(m), tuple(-e for e in reversed(m)))


def monomials_of_degree(nvars: int, d: int) -> list[Monomial]:
    """All monomials of degree d, largest first in degrevlex."""
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=degrevlex_key, reverse=True)
    return out


def monomials_up_to(nvars: int, d: int) -> list[Monomial]:
    """All monomials of degree <= d, ascending in degrevlex."""
    out = []
    for k in range(d + 1):
        out.extend(reversed(monomials_of_degree(nvars, k)))
    return out


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def unit_monomial(nvars: int, i: int, k: int = 1) -> Monomial:
    e = [0] * nvars
    e[i] = k
    return tuple(e)


# ---------------------------------------------------------------- polynomials

class Poly:
    """Sparse polynomial ``{exponent tuple: Fraction}`` in ``nvars`` variables."""

    symbol = "x"
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != nvars:
                raise DimensionMismatch(f"monomial {m} does not have {nvars} exponents")
            c = as_fraction(c)
            if c:
                clean[m] = clean.get(m, Fraction(0)) + c
                if not clean[m]:
                    del clean[m]
        self.terms = clean

    # construction helpers
    @classmethod
    def zero(cls, nvars: int):
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c=1):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, m: Monomial, c=1):
        return cls(len(m), {tuple(m): c})

    @classmethod
    def var(cls, nvars: int, i: int):
        """The i-th variable, 0-based."""
        return cls(nvars, {unit_monomial(nvars, i): 1})

    @classmethod
    def parse(cls, text: str, nvars: int | None = None):
        return parse_polynomial(text, nvars, cls)

    def _like(self, terms):
        return type(self)(self.nvars, terms)

    # basic properties
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    @property
    def order(self) -> int:
        """Lowest degree of a term; -1 for zero."""
        return min((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def homogeneous_part(self, d: int):
        return self._like({m: c for m, c in self.terms.items() if sum(m) == d})

    def truncate_below(self, d: int):
        """Drop terms of degree >= d."""
        return self._like({m: c for m, c in self.terms.items() if sum(m) < d})

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=degrevlex_key)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: degrevlex_key(t[0]), reverse=True)

    # arithmetic
    def _check(self, other):
        if not isinstance(other, Poly) or type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.nvars != self.nvars:
            raise DimensionMismatch("polynomials live in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = self._like({(0,) * self.nvars: other})
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_fraction(other)
            return self._like({m: c * v for m, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return self._like(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = as_fraction(c)
        return self._like({m: v / c for m, v in self.terms.items()})

    def __pow__(self, k: int):
        result = self._like({(0,) * self.nvars: 1})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._like({(0,) * self.nvars: other})
        return type(other) is type(self) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    def __str__(self):
        return format_polynomial(self)

    def to_vector(self, index: dict) -> dict:
        """Sparse coordinate vector w.r.t. a ``{monomial: column}`` index."""
        try:
            return {index[m]: c for m, c in self.terms.items()}
        except KeyError as e:
            raise DimensionMismatch(f"monomial {e.args[0]} is outside the coordinate index") from None

    @classmethod
    def from_vector(cls, nvars: int, monomials: Sequence[Monomial], vec):
        if isinstance(vec, dict):
            return cls(nvars, {monomials[j]: c for j, c in vec.items()})
        return cls(nvars, {m: c for m, c in zip(monomials, vec) if c})

    def substitute_linear(self, images: Sequence["Poly"]):
        """Replace the i-th variable by ``images[i]`` (polynomials of one kind)."""
        if len(images) != self.nvars:
            raise DimensionMismatch("need one image per variable")
        target = type(images[0]) if images else type(self)
        m_out = images[0].nvars if images else self.nvars
        powers: dict = {}

        def pw(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        acc = target(m_out)
        for m, c in self.terms.items():
            t = target.constant(m_out, c)
            for i, k in enumerate(m):
                if k:
                    t = t * pw(i, k)
            acc = acc + t
        return acc


class DualPolynomial(Poly):
    """Element of the dual ring S (variables x1..xn)."""

    symbol = "x"
    __slots__ = ()


class OperatorPolynomial(Poly):
    """Element of the operator ring R (variables a1..an)."""

    symbol = "a"
    __slots__ = ()

    def evaluate(self, point: Sequence) -> Fraction:
        acc = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for x, k in zip(point, m):
                if k:
                    t *= as_fraction(x) ** k
            acc += t
        return acc


def divided_power(f: Poly, k: int) -> Poly:
    """f^(k) = f^k / k!."""
    return (f ** k) / factorial(k)


def _falling(b: int, a: int) -> int:
    out = 1
    for t in range(b - a + 1, b + 1):
        out *= t
    return out


def contract(op: OperatorPolynomial, f: DualPolynomial) -> DualPolynomial:
    """The contraction ``op -| f``."""
    if op.nvars != f.nvars:
        raise DimensionMismatch("operator and dual polynomial differ in number of variables")
    out: dict = {}
    for a, c1 in op.terms.items():
        for b, c2 in f.terms.items():
            if all(x <= y for x, y in zip(a, b)):
                k = 1
                for x, y in zip(a, b):
                    if x:
                        k *= _falling(y, x)
                m = tuple(y - x for x, y in zip(a, b))
                out[m] = out.get(m, 0) + c1 * c2 * k
    return DualPolynomial(f.nvars, out)


def contract_monomial(a: Monomial, f: DualPolynomial) -> DualPolynomial:
    out = {}
    for b, c in f.terms.items():
        if all(x <= y for x, y in zip(a, b)):
            k = 1
            for x, y in zip(a, b):
                if x:
                    k *= _falling(y, x)
            out[tuple(y - x for x, y in zip(a, b))] = c * k
    return DualPolynomial(f.nvars, out)


def essential_variable_count(f: DualPolynomial) -> int:
    """Number of linear forms f really depends on: dim span of first partials."""
    n = f.nvars
    partials = [contract_monomial(unit_monomial(n, i), f) for i in range(n)]
    mons = sorted({m for p in partials for m in p.terms})
    index = {m: j for j, m in enumerate(mons)}
    return Subspace(len(mons), [p.to_vector(index) for p in partials]).dim


# ---------------------------------------------------------------- spaces of polynomials

class PolySpace:
    """Finite-dimensional space of polynomials over a fixed monomial list."""

    def __init__(self, cls, nvars: int, monomials: Sequence[Monomial], polys: Iterable[Poly] = ()):
        self.cls = cls
        self.nvars = nvars
        self.monomials = tuple(monomials)
        self.index = {m: j for j, m in enumerate(self.monomials)}
        self.space = Subspace(len(self.monomials), [p.to_vector(self.index) for p in polys])

    @property
    def dim(self) -> int:
        return self.space.dim

    def basis(self) -> list[Poly]:
        return [self.cls.from_vector(self.nvars, self.monomials, v) for v in self.space.basis]

    def contains(self, p: Poly) -> bool:
        if any(m not in self.index for m in p.terms):
            return False
        vec = [Fraction(0)] * len(self.monomials)
        for m, c in p.terms.items():
            vec[self.index[m]] = c
        return self.space.contains(vec)

    def __eq__(self, other):
        return (isinstance(other, PolySpace) and set(self.monomials) == set(other.monomials)
                and all(other.contains(p) for p in self.basis()) and self.dim == other.dim)

    def __repr__(self):
        return f"PolySpace(dim={self.dim})"


# ---------------------------------------------------------------- text syntax

_TOKEN = re.compile(r"\s*(?:(\d+)|([xa])(\d+)|(\^)|(\*)|(/)|(\+)|(-)|(\()|(\))|(,))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 10]!r} at position {pos}")
        pos = m.end()
        num, var, idx, caret, star, slash, plus, minus, lp, rp, comma = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif var is not None:
            out.append(("var", (var, int(idx))))
        else:
            out.append(("op", m.group(0).strip()))
    return out


class _Parser:
    def __init__(self, tokens, nvars, cls):
        self.toks = tokens
        self.i = 0
        self.nvars = nvars
        self.cls = cls

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        t = self.peek()
        if t[0] is None or (kind and t[0] != kind) or (val and t[1] != val):
            raise ParseError(f"expected {val or kind}, found {t[1]!r}")
        self.i += 1
        return t

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while True:
            t = self.peek()
            if t == ("op", "*"):
                self.take()
                acc = acc * self.factor()
            elif t == ("op", "/"):
                self.take()
                acc = acc / self.take("num")[1]
            elif t[0] in ("num", "var") or t == ("op", "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            if self.peek() == ("op", "("):
                self.take()
                k = self.take("num")[1]
                self.take("op", ")")
                return divided_power(base, k)
            return base ** self.take("num")[1]
        return base

    def atom(self):
        t = self.peek()
        if t[0] == "num":
            self.take()
            val = Fraction(t[1])
            if self.peek() == ("op", "/"):
                self.take()
                val /= self.take("num")[1]
            return self.cls.constant(self.nvars, val)
        if t[0] == "var":
            self.take()
            sym, idx = t[1]
            if sym != self.cls.symbol:
                raise ParseError(f"variable {sym}{idx} does not belong to {self.cls.__name__}")
            if not 1 <= idx <= self.nvars:
                raise ParseError(f"variable {sym}{idx} outside 1..{self.nvars}")
            return self.cls.var(self.nvars, idx - 1)
        if t == ("op", "("):
            self.take()
            e = self.expr()
            self.take("op", ")")
            return e
        raise ParseError(f"unexpected token {t[1]!r}")


def _infer_nvars(tokens, symbol) -> int:
    idx = [t[1][1] for t in tokens if t[0] == "var" and t[1][0] == symbol]
    return max(idx, default=1)


def parse_polynomial(text: str, nvars: int | None = None, cls=DualPolynomial):
    """Parse one polynomial.  ``x1..xn`` are dual, ``a1..an`` operator variables.

    ``^k`` is an ordinary power and ``^(k)`` a divided power; ``*`` may be
    omitted and rationals are written ``p/q``.
    """
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial")
    if nvars is None:
        nvars = _infer_nvars(toks, cls.symbol)
    p = _Parser(toks, nvars, cls)
    out = p.expr()
    if p.i != len(toks):
        raise ParseError(f"trailing input near {toks[p.i][1]!r}")
    return out


def split_list(text: str) -> list[str]:
    """Split a comma-separated list at top-level commas."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_polynomial_list(text: str, nvars: int | None = None, cls=DualPolynomial) -> list:
    items = split_list(text)
    if nvars is None:
        nvars = max((_infer_nvars(_tokenize(s), cls.symbol) for s in items), default=1)
    return [parse_polynomial(s, nvars, cls) for s in items]


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Poly) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for m, c in p.sorted_terms():
        mono = "*".join(f"{p.symbol}{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        else:
            body = _fmt_coeff(a)
        pieces.append((c < 0, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out
