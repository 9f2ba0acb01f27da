"""Inverse systems: closure under contraction, Hilbert functions, apolar ideals.

For a finite set E of dual polynomials, Diff(E) is the R-submodule of S they
generate and Ann(E) is its annihilator.  R/Ann(E) is a local algebra of
dimension dim Diff(E); its Hilbert function is read off the filtration of
Diff(E) by degree:

    H(i) = dim Diff(E)_{<=i} - dim Diff(E)_{<=i-1}

which for homogeneous E is just the dimension of the degree-i piece.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, ParseError
from .exactalg import Subspace, sparse_kernel
from .poly import (DualPolynomial, Monomial, OperatorPolynomial, PolySpace, contract,
                   contract_monomial, monomials_of_degree, monomials_up_to, parse_polynomial_list)
from .quotient import QuotientAlgebra


class GradedProfile(tuple):
    """A Hilbert function (H(0), H(1), ...) with trailing zeros removed."""

    def __new__(cls, values: Iterable[int] = ()):
        vals = list(values)
        while vals and vals[-1] == 0:
            vals.pop()
        return super().__new__(cls, vals)

    @property
    def colength(self) -> int:
        return sum(self)

    def __str__(self):
        return "(" + ",".join(str(v) for v in self) + ")"

    def to_json(self) -> list:
        return list(self)


class InverseSystem:
    """A finite set of dual polynomials in a fixed number of variables."""

    def __init__(self, nvars: int, generators: Iterable[DualPolynomial]):
        gens = []
        for g in generators:
            if not isinstance(g, DualPolynomial):
                raise TypeError("inverse system generators must be DualPolynomials")
            if g.nvars != nvars:
                raise DimensionMismatch(f"generator {g} is not in {nvars} variables")
            if g and g not in gens:
                gens.append(g)
        self.nvars = nvars
        self.generators = tuple(gens)

    @classmethod
    def parse(cls, text: str, nvars: int | None = None) -> "InverseSystem":
        gens = parse_polynomial_list(text, nvars, DualPolynomial)
        if not gens:
            raise ParseError("empty inverse system")
        return cls(gens[0].nvars, gens)

    @classmethod
    def of(cls, *texts: str, nvars: int | None = None) -> "InverseSystem":
        return cls.parse(", ".join(texts), nvars)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return "InverseSystem(" + ", ".join(str(g) for g in self.generators) + ")"

    @property
    def max_degree(self) -> int:
        return max((g.degree for g in self.generators), default=-1)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def to_json(self) -> dict:
        return {"vars": self.nvars, "generators": [str(g) for g in self.generators]}


def _as_system(E, nvars=None) -> InverseSystem:
    if isinstance(E, InverseSystem):
        return E
    if isinstance(E, str):
        return InverseSystem.parse(E, nvars)
    E = list(E)
    if not E:
        raise ParseError("empty inverse system")
    return InverseSystem(E[0].nvars, E)


@dataclass
class DiffClosure:
    """Diff(E) inside S_{<=s}, with columns ordered by decreasing degree.

    Because the columns run from the top degree down, a row of the reduced
    echelon basis lies in S_{<=i} exactly when its pivot has degree <= i.
    """

    nvars: int
    monomials: tuple  # column order: degrevlex descending
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim

    def pivot_degrees(self) -> list[int]:
        out = []
        for row in self.space.basis:
            j = next(k for k, x in enumerate(row) if x)
            out.append(sum(self.monomials[j]))
        return out

    def filtration_dim(self, i: int) -> int:
        """dim Diff(E) cap S_{<=i}."""
        return sum(1 for d in self.pivot_degrees() if d <= i)

    def hilbert_function(self) -> GradedProfile:
        degs = self.pivot_degrees()
        top = max(degs, default=-1)
        return GradedProfile(degs.count(i) for i in range(top + 1))

    def basis(self) -> list[DualPolynomial]:
        return [DualPolynomial.from_vector(self.nvars, self.monomials, v) for v in self.space.basis]

    def degree_piece(self, i: int) -> list[DualPolynomial]:
        """Homogeneous degree-i elements (meaningful for homogeneous E)."""
        out = []
        for p in self.basis():
            if p.is_homogeneous() and p.degree == i:
                out.append(p)
        return out

    def contains(self, f: DualPolynomial) -> bool:
        index = {m: j for j, m in enumerate(self.monomials)}
        if any(m not in index for m in f.terms):
            return False
        v = [Fraction(0)] * len(self.monomials)
        for m, c in f.terms.items():
            v[index[m]] = c
        return self.space.contains(v)


def diff_closure(E, nvars: int | None = None) -> DiffClosure:
    """The span of all contractions a^u -| F for F in E."""
    E = _as_system(E, nvars)
    n, s = E.nvars, max(E.max_degree, 0)
    mons = tuple(reversed(monomials_up_to(n, s)))
    index = {m: j for j, m in enumerate(mons)}
    vecs = []
    for F in E:
        for k in range(F.degree + 1):
            for u in monomials_of_degree(n, k):
                h = contract_monomial(u, F)
                if h:
                    vecs.append(h.to_vector(index))
    return DiffClosure(n, mons, Subspace(len(mons), vecs))


def hilbert_function(E, nvars: int | None = None) -> GradedProfile:
    """Hilbert function of R/Ann(E)."""
    return diff_closure(E, nvars).hilbert_function()


def _annihilator_map(E: InverseSystem, ops: Sequence[Monomial]):
    """Columns: for each operator monomial, the concatenated contractions."""
    n = E.nvars
    s = max(E.max_degree, 0)
    dual = monomials_up_to(n, s)
    index = {m: j for j, m in enumerate(dual)}
    size = len(dual)
    cols = []
    for u in ops:
        vec = {}
        for g, F in enumerate(E.generators):
            for j, c in contract_monomial(u, F).to_vector(index).items():
                vec[g * size + j] = c
        cols.append(vec)
    return cols


def apolar_ideal_piece(E, k: int, nvars: int | None = None) -> PolySpace:
    """Operators of degree k (degree <= k if E is not homogeneous) killing E."""
    E = _as_system(E, nvars)
    n = E.nvars
    if E.is_homogeneous():
        ops = monomials_of_degree(n, k)
    else:
        ops = list(reversed(monomials_up_to(n, k)))
    cols = _annihilator_map(E, ops)
    # kernel of the map sending the j-th operator monomial to cols[j]:
    # transpose to rows indexed by target coordinates
    rows: dict = {}
    for j, col in enumerate(cols):
        for t, c in col.items():
            rows.setdefault(t, {})[j] = c
    kern = sparse_kernel(list(rows.values()), len(ops))
    polys = [OperatorPolynomial(n, {ops[j]: c for j, c in v.items()}) for v in kern]
    return PolySpace(OperatorPolynomial, n, ops, polys)


def minimal_generators_in_degree(E, k: int, nvars: int | None = None) -> int:
    """dim Ann(E)_k - dim (m * Ann(E)_{k-1})_k for homogeneous E."""
    E = _as_system(E, nvars)
    if not E.is_homogeneous():
        raise ValueError("graded generator counts need a homogeneous inverse system")
    n = E.nvars
    top = apolar_ideal_piece(E, k)
    if k == 0:
        return top.dim
    below = apolar_ideal_piece(E, k - 1)
    prods = []
    for p in below.basis():
        for i in range(n):
            e = [0] * n
            e[i] = 1
            prods.append(p * OperatorPolynomial.monomial(tuple(e)))
    span = PolySpace(OperatorPolynomial, n, top.monomials, prods)
    return top.dim - span.dim


def socle_type(E, nvars: int | None = None) -> dict[int, int]:
    """{degree: a_i} with a_i = dim M_i - dim (linear contractions of M_{i+1})."""
    E = _as_system(E, nvars)
    if not E.is_homogeneous():
        raise ValueError("socle type is defined here for homogeneous inverse systems")
    n = E.nvars
    clo = diff_closure(E)
    s = E.max_degree
    pieces = {i: clo.degree_piece(i) for i in range(s + 1)}
    out = {}
    for i in range(s + 1):
        mi = len(pieces[i])
        if i == s:
            a = mi
        else:
            derivs = [contract_monomial(tuple(int(j == v) for j in range(n)), f)
                      for f in pieces[i + 1] for v in range(n)]
            mons = monomials_of_degree(n, i)
            a = mi - PolySpace(DualPolynomial, n, mons, [d for d in derivs if d]).dim
        if a:
            out[i] = a
    return out


@dataclass
class ApolarAlgebra:
    """R/Ann(E) with a standard-monomial basis and its multiplication matrices."""

    quotient: QuotientAlgebra

    @property
    def tuple(self):
        return self.quotient.to_tuple()

    @property
    def basis(self):
        return self.quotient.basis

    @property
    def one(self) -> tuple:
        return self.quotient.one()

    @property
    def dim(self) -> int:
        return self.quotient.dim


def annihilator_quotient(E, nvars: int | None = None) -> QuotientAlgebra:
    E = _as_system(E, nvars)
    n = E.nvars
    s = max(E.max_degree, 0)
    dual = monomials_up_to(n, s)
    index = {m: j for j, m in enumerate(dual)}
    size = len(dual)

    def evaluate(u):
        vec = {}
        if sum(u) > s:
            return vec
        for g, F in enumerate(E.generators):
            for j, c in contract_monomial(u, F).to_vector(index).items():
                vec[g * size + j] = c
        return vec

    return QuotientAlgebra.from_evaluator(n, evaluate, max_degree=s + 1)


def apolar_algebra(E, nvars: int | None = None) -> ApolarAlgebra:
    """Multiplication matrices of R/Ann(E); the class of 1 is a cyclic vector."""
    return ApolarAlgebra(annihilator_quotient(E, nvars))


def apply_operator(op: OperatorPolynomial, E) -> list[DualPolynomial]:
    E = _as_system(E)
    return [contract(op, F) for F in E]
