"""Constructions of the explicit matrices and ideals used by the fixtures.

Matrix tuples are stored as recipes rather than copied entries: a first
matrix A_1(lambda) = C + lambda L given by blocks, and every other matrix as
a Laurent combination of powers of A_1(lambda).  The limit at lambda = 0 is
only taken after checking that all negative powers of lambda cancel.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from ..commuting import CommutingTuple, ShapeConstraint
from ..errors import DimensionMismatch, FiniteAlgError
from ..exactalg import Matrix, as_fraction, sparse_rank
from ..ideals import FiniteIdeal
from ..poly import OperatorPolynomial, mono_mul, unit_monomial


class RecipeError(FiniteAlgError):
    """A recipe does not produce what it promises (e.g. a pole at lambda = 0)."""


# ---------------------------------------------------------------- block matrices

def _block_value(spec, rows: int, cols: int) -> Matrix:
    if spec == "I":
        if rows != cols:
            raise DimensionMismatch("identity block must be square")
        return Matrix.identity(rows)
    if isinstance(spec, str) and spec.startswith("e"):
        # e<k>: k-th standard basis column (1-based)
        k = int(spec[1:]) - 1
        return Matrix.from_entries(rows, cols, {(k, 0): 1})
    m = Matrix(spec)
    if m.shape != (rows, cols):
        raise DimensionMismatch(f"block has shape {m.shape}, expected {(rows, cols)}")
    return m


def block_matrix(sizes: Sequence[int], blocks: dict) -> Matrix:
    """Assemble a square matrix from {"i,j": block} with the given block sizes.

    A block is a nested list, "I" for the identity, or "e<k>" for a
    standard basis column.
    """
    d = sum(sizes)
    offs = [sum(sizes[:k]) for k in range(len(sizes))]
    entries = {}
    for key, spec in blocks.items():
        bi, bj = (int(t) for t in key.split(","))
        b = _block_value(spec, sizes[bi], sizes[bj])
        for r in range(b.nrows):
            for c in range(b.ncols):
                if b[r, c]:
                    entries[(offs[bi] + r, offs[bj] + c)] = b[r, c]
    return Matrix.from_entries(d, d, entries)


def unit_matrix(d: int, pairs: Sequence[tuple[int, int]]) -> Matrix:
    """Sum of E_{ij} over 1-based pairs."""
    return Matrix.from_entries(d, d, {(i - 1, j - 1): 1 for i, j in pairs})


# ---------------------------------------------------------------- Laurent recipes

class LaurentMatrix:
    """A matrix polynomial in lambda and 1/lambda, stored as {exponent: Matrix}."""

    def __init__(self, d: int, coeffs: dict | None = None):
        self.d = d
        self.coeffs = {k: m for k, m in (coeffs or {}).items() if not m.is_zero()}

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        out = dict(self.coeffs)
        for k, m in other.coeffs.items():
            out[k] = out[k] + m if k in out else m
        return LaurentMatrix(self.d, out)

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        out: dict = {}
        for k1, m1 in self.coeffs.items():
            for k2, m2 in other.coeffs.items():
                p = m1 @ m2
                out[k1 + k2] = out[k1 + k2] + p if k1 + k2 in out else p
        return LaurentMatrix(self.d, out)

    def scale(self, c, shift: int = 0) -> "LaurentMatrix":
        return LaurentMatrix(self.d, {k + shift: m.scale(c) for k, m in self.coeffs.items()})

    def min_exponent(self) -> int:
        return min(self.coeffs, default=0)

    def at(self, lam) -> Matrix:
        lam = as_fraction(lam)
        if lam == 0:
            if self.min_exponent() < 0:
                raise RecipeError("negative powers of lambda survive; the limit at 0 does not exist")
            return self.coeffs.get(0, Matrix.zeros(self.d))
        out = Matrix.zeros(self.d)
        for k, m in self.coeffs.items():
            out = out + m.scale(lam ** k)
        return out


def laurent_tuple(recipe: dict) -> list[LaurentMatrix]:
    """Matrices A_1(lambda), ..., A_n(lambda) from a recipe dictionary.

    ``recipe["A1"]`` has block sizes and the constant and lambda-linear
    blocks; ``recipe["powers"]`` lists, for each further matrix, terms
    [coefficient, lambda exponent, power of A_1].
    """
    a1 = recipe["A1"]
    sizes = a1["sizes"]
    d = sum(sizes)
    base = LaurentMatrix(d, {0: block_matrix(sizes, a1.get("const", {})),
                             1: block_matrix(sizes, a1.get("lambda", {}))})
    top = max((t[2] for terms in recipe["powers"] for t in terms), default=1)
    powers = [LaurentMatrix(d, {0: Matrix.identity(d)}), base]
    for _ in range(2, top + 1):
        powers.append(powers[-1] @ base)
    out = [base]
    for terms in recipe["powers"]:
        acc = LaurentMatrix(d)
        for coeff, lam_exp, k in terms:
            acc = acc + powers[k].scale(as_fraction(coeff), lam_exp)
        out.append(acc)
    return out


def tuple_at(recipe: dict, lam) -> CommutingTuple:
    return CommutingTuple([m.at(lam) for m in laurent_tuple(recipe)])


def limit_is_polynomial(recipe: dict) -> bool:
    return all(m.min_exponent() >= 0 for m in laurent_tuple(recipe))


# ---------------------------------------------------------------- shapes and projections

def block_shape(sizes: Sequence[int], free: Sequence[str]) -> ShapeConstraint:
    return ShapeConstraint.from_blocks(sizes, [tuple(int(t) for t in k.split(",")) for k in free])


def blocks_vanish(t: CommutingTuple, sizes: Sequence[int], zero: Sequence[str]) -> bool:
    """True when the listed blocks of every matrix are zero."""
    offs = [sum(sizes[:k]) for k in range(len(sizes))]
    for m in t:
        for key in zero:
            bi, bj = (int(x) for x in key.split(","))
            for r in range(sizes[bi]):
                for c in range(sizes[bj]):
                    if m[offs[bi] + r, offs[bj] + c]:
                        return False
    return True


def project_tuple(t: CommutingTuple, shape: ShapeConstraint) -> CommutingTuple:
    """Zero every entry outside the shape."""
    mats = []
    for k, m in enumerate(t):
        mats.append(Matrix.from_entries(t.d, t.d, {(r, c): m[r, c] for r in range(t.d) for c in range(t.d)
                                                   if m[r, c] and shape.free(k, r, c)}))
    return CommutingTuple(mats, check=False)


def projected_tangent_rank(t: CommutingTuple, shape: ShapeConstraint, target: ShapeConstraint) -> int:
    """Rank of the tangent space at t (inside shape) after dropping coordinates outside target."""
    from ..commuting import tangent_space_basis
    basis, cols = tangent_space_basis(t, shape)
    keep = {j: key for key, j in cols.items() if target.free(*key)}
    rows = [{j: x for j, x in v.items() if j in keep} for v in basis]
    return sparse_rank([r for r in rows if r])


# ---------------------------------------------------------------- socle example X(n, r, s)

def socle_example(n: int, r: int, s: int) -> CommutingTuple:
    """Block matrices of socle dimension r - s + 1 in the family with blocks (1, r, n, 1).

    b_i = e_{r-i+1} for i <= s, c_i = 0, f_i = e_i and D_i built from unit
    matrices along shifted diagonals.
    """
    if not 1 <= s <= r <= n:
        raise ValueError("need 1 <= s <= r <= n")
    d = n + r + 2
    mats = []
    for i in range(1, n + 1):
        e = {}
        if i <= s:
            e[(0, 1 + (r - i + 1) - 1)] = 1
        pairs = []
        if i <= s:
            pairs += [(r - s + i + j - 1, j) for j in range(1, s + 2 - i)]
            pairs += [(j, n - r + s + 1 - i + j) for j in range(1, r - s + 1)]
        elif i <= n - r + s:
            pairs += [(j, n - r + s + 1 - i + j) for j in range(1, r - s + 1)]
        else:
            pairs += [(i - n + r - s + j - 1, j) for j in range(1, n + 2 - i)]
        for a, b in pairs:
            e[(1 + a - 1, 1 + r + b - 1)] = e.get((1 + a - 1, 1 + r + b - 1), 0) + 1
        e[(1 + r + i - 1, d - 1)] = 1
        mats.append(Matrix.from_entries(d, d, e))
    return CommutingTuple(mats, check=False)


# ---------------------------------------------------------------- ideals with syzygy constraints

def syzygy_constraint_rank(I: FiniteIdeal, quadrics: Sequence[OperatorPolynomial],
                           tails: Sequence[OperatorPolynomial]) -> int:
    """Rank of the linear conditions on the tail coefficients of a deformed family.

    Each quadric generator q_k of I is perturbed to q_k + sum_t p_{k,t} m_t with
    tail monomials m_t.  For every pair of monomial quadrics with u q_j = v q_k
    (u, v variables) the difference u theta_j - v theta_k is linear in the p's;
    its class in R/I must vanish.  The rows are those classes.
    """
    q = I.quotient
    n = I.nvars
    lead = [g.leading_monomial() for g in quadrics]
    tail_m = [t.leading_monomial() for t in tails]
    T = len(tail_m)
    rows = []
    for j, k in combinations(range(len(lead)), 2):
        for u in range(n):
            for v in range(n):
                if mono_mul(unit_monomial(n, u), lead[j]) != mono_mul(unit_monomial(n, v), lead[k]):
                    continue
                block: dict = {}
                for t in range(T):
                    for sgn, var, idx in ((1, u, j), (-1, v, k)):
                        vec = q.monomial_vector(mono_mul(unit_monomial(n, var), tail_m[t]))
                        for pos, x in enumerate(vec):
                            if x:
                                row = block.setdefault(pos, {})
                                col = idx * T + t
                                row[col] = row.get(col, 0) + sgn * x
                rows.extend(r for r in block.values() if any(r.values()))
    return sparse_rank(rows)
