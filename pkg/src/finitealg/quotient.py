"""Finite-dimensional quotients R/I given by a standard monomial basis.

A ``QuotientAlgebra`` stores the set B of standard monomials of I for
degrevlex (an order ideal) together with the matrices of multiplication by
each variable in that basis.  Any way of evaluating monomials in some vector
space whose annihilator is I can be turned into this normal form by
``from_evaluator``: monomials are scanned in increasing degrevlex order and
kept when they are independent of the ones kept so far.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .commuting import CommutingTuple
from .errors import DimensionMismatch, InfiniteColengthError
from .exactalg import Matrix, as_fraction
from .poly import Monomial, OperatorPolynomial, degrevlex_key, monomials_of_degree


class Reducer:
    """Incremental Gaussian elimination that remembers how vectors were built."""

    def __init__(self):
        self.rows = []  # (pivot, vec, combo) with vec sparse and combo {label index: coeff}
        self.count = 0

    def _reduce(self, v: dict):
        v = dict(v)
        combo: dict = {}
        for piv, row, rc in self.rows:
            c = v.get(piv)
            if not c:
                continue
            for j, x in row.items():
                y = v.get(j, 0) - c * x
                if y:
                    v[j] = y
                else:
                    v.pop(j, None)
            for j, x in rc.items():
                combo[j] = combo.get(j, 0) + c * x
        return v, combo

    def add(self, v: dict) -> bool:
        """Add v if independent; returns whether it was added."""
        red, combo = self._reduce(v)
        if not red:
            return False
        piv = min(red)
        lead = red[piv]
        row = {j: x / lead for j, x in red.items()}
        rc = {j: -x / lead for j, x in combo.items()}
        rc[self.count] = rc.get(self.count, 0) + 1 / Fraction(lead)
        self.rows.append((piv, row, rc))
        self.count += 1
        return True

    def express(self, v: dict):
        """Coordinates of v in the added vectors, or None if v is not in their span."""
        red, combo = self._reduce(v)
        if red:
            return None
        out = [Fraction(0)] * self.count
        for j, x in combo.items():
            out[j] = x
        return out


def _divisors_in(m: Monomial, basis_set) -> bool:
    for i, e in enumerate(m):
        if e:
            k = list(m)
            k[i] -= 1
            if tuple(k) not in basis_set:
                return False
    return True


class QuotientAlgebra:
    """R/I as a vector space with basis B (standard monomials) and the
    multiplication matrices M_i (column j = coordinates of a_i * b_j)."""

    def __init__(self, nvars: int, basis: Sequence[Monomial], matrices: Sequence[Matrix]):
        self.nvars = nvars
        self.basis = tuple(tuple(b) for b in basis)
        self.position = {b: j for j, b in enumerate(self.basis)}
        self.matrices = tuple(matrices)
        if len(self.matrices) != nvars:
            raise DimensionMismatch("need one multiplication matrix per variable")
        self._cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self):
        return f"QuotientAlgebra(nvars={self.nvars}, dim={self.dim})"

    # evaluation ------------------------------------------------------------
    def monomial_vector(self, m: Monomial) -> tuple:
        """Coordinates of the class of the monomial m."""
        m = tuple(m)
        if m in self._cache:
            return self._cache[m]
        d = self.dim
        if m in self.position:
            v = [Fraction(0)] * d
            v[self.position[m]] = Fraction(1)
            v = tuple(v)
        elif d == 0:
            v = ()
        else:
            i = max(k for k, e in enumerate(m) if e)
            prev = list(m)
            prev[i] -= 1
            v = self.matrices[i] @ self.monomial_vector(tuple(prev))
        self._cache[m] = v
        return v

    def vector(self, f: OperatorPolynomial) -> tuple:
        acc = [Fraction(0)] * self.dim
        for m, c in f.terms.items():
            for j, x in enumerate(self.monomial_vector(m)):
                if x:
                    acc[j] += c * x
        return tuple(acc)

    def contains(self, f: OperatorPolynomial) -> bool:
        if f.nvars != self.nvars:
            raise DimensionMismatch("polynomial lives in a different number of variables")
        return not any(self.vector(f))

    def one(self) -> tuple:
        return self.monomial_vector((0,) * self.nvars)

    def to_tuple(self) -> CommutingTuple:
        return CommutingTuple(self.matrices, check=False)

    def polynomial(self, coords: Sequence) -> OperatorPolynomial:
        return OperatorPolynomial(self.nvars, {b: c for b, c in zip(self.basis, coords) if c})

    def normal_form(self, f: OperatorPolynomial) -> OperatorPolynomial:
        return self.polynomial(self.vector(f))

    # structure -------------------------------------------------------------
    def is_local(self) -> bool:
        """True when every variable acts nilpotently (support at the origin)."""
        return all((m ** self.dim).is_zero() for m in self.matrices) if self.dim else True

    def loewy_length(self) -> int:
        """Smallest r with every monomial of degree r zero in the quotient."""
        r = 0
        while True:
            if all(not any(self.monomial_vector(m)) for m in monomials_of_degree(self.nvars, r)):
                return r
            r += 1
            if r > self.dim + 1:
                raise InfiniteColengthError("quotient is not local")

    def border_basis(self) -> list[OperatorPolynomial]:
        """Generators a_i*b - NF(a_i*b) over the border of B; they generate I."""
        if self.dim == 0:
            return [OperatorPolynomial.constant(self.nvars)]
        seen, out = set(), []
        for b in self.basis:
            for i in range(self.nvars):
                m = list(b)
                m[i] += 1
                m = tuple(m)
                if m in self.position or m in seen:
                    continue
                seen.add(m)
                f = OperatorPolynomial.monomial(m) - self.polynomial(self.monomial_vector(m))
                out.append(f)
        out.sort(key=lambda f: degrevlex_key(f.leading_monomial()))
        return out

    # construction ----------------------------------------------------------
    @classmethod
    def from_evaluator(cls, nvars: int, evaluate: Callable[[Monomial], dict],
                       max_degree: int | None = None) -> "QuotientAlgebra":
        """Greedy standard-monomial basis from a monomial evaluation map.

        ``evaluate(m)`` returns a sparse vector; the ideal is the kernel of
        the induced linear map.  The scan stops at the first degree that adds
        nothing, which is correct because standard monomials form an order
        ideal.
        """
        red = Reducer()
        basis: list[Monomial] = []
        basis_set: set = set()
        k = 0
        while True:
            added = False
            for m in reversed(monomials_of_degree(nvars, k)):
                if k and not _divisors_in(m, basis_set):
                    continue
                if red.add(evaluate(m)):
                    basis.append(m)
                    basis_set.add(m)
                    added = True
            if not added:
                break
            k += 1
            if max_degree is not None and k > max_degree:
                raise InfiniteColengthError(f"standard monomials still appear in degree {k}")
        d = len(basis)
        mats = []
        for i in range(nvars):
            cols = []
            for b in basis:
                m = list(b)
                m[i] += 1
                m = tuple(m)
                if m in basis_set:
                    col = [Fraction(0)] * d
                    col[basis.index(m)] = Fraction(1)
                else:
                    col = red.express(evaluate(m))
                    if col is None:
                        raise InfiniteColengthError("evaluation map is not closed under multiplication")
                cols.append(col)
            mats.append(Matrix([[cols[j][r] for j in range(d)] for r in range(d)], d))
        return cls(nvars, basis, mats)

    @classmethod
    def from_krylov(cls, matrices: Sequence[Matrix], v: Sequence) -> "QuotientAlgebra":
        """R/I for I = {f : f(A) v = 0}; the matrices must commute."""
        nvars = len(matrices)
        v = tuple(as_fraction(x) for x in v)
        cache = {(0,) * nvars: v}

        def vec(m):
            if m not in cache:
                i = max(k for k, e in enumerate(m) if e)
                prev = list(m)
                prev[i] -= 1
                cache[m] = matrices[i] @ vec(tuple(prev))
            return cache[m]

        def evaluate(m):
            return {j: x for j, x in enumerate(vec(m)) if x}

        return cls.from_evaluator(nvars, evaluate, max_degree=len(v) + 1)


def block_diagonal(a: Matrix, b: Matrix) -> Matrix:
    if a.nrows == 0:
        return b
    if b.nrows == 0:
        return a
    return Matrix.block([[a, None], [None, b]], [a.nrows, b.nrows])


def intersect_quotients(p: QuotientAlgebra, q: QuotientAlgebra) -> QuotientAlgebra:
    """R/(I cap J) as the cyclic submodule of R/I x R/J generated by (1, 1)."""
    if p.nvars != q.nvars:
        raise DimensionMismatch("ideals live in different numbers of variables")
    mats = [block_diagonal(a, b) for a, b in zip(p.matrices, q.matrices)]
    return QuotientAlgebra.from_krylov(mats, p.one() + q.one())


def translate_quotient(p: QuotientAlgebra, shift: Sequence) -> QuotientAlgebra:
    """Quotient of the ideal {f(a - shift) : f in I}; its support moves by +shift."""
    shift = [as_fraction(s) for s in shift]
    mats = [m + Matrix.identity(p.dim).scale(s) for m, s in zip(p.matrices, shift)]
    return QuotientAlgebra.from_krylov(mats, p.one())

