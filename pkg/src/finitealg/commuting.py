"""Tuples of commuting matrices and their tangent spaces.

A tuple (A_1..A_n) of commuting d x d matrices with a cyclic vector v is the
same thing as a point of the Hilbert scheme of d points in affine n-space:
the module is R/I with I = {f : f(A) v = 0}.  The tangent space to the
commuting variety at the tuple is

    {(Z_1..Z_n) : A_i Z_j + Z_i A_j = A_j Z_i + Z_j A_i  for all i < j}

and the tangent space of the Hilbert scheme has dimension d - d^2 + dim of
that space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NotCommutingError, NotFoundError, NotLocalError
from .exactalg import (Matrix, Subspace, UPoly, as_fraction, char_poly, is_squarefree,
                       power_kernel_dim, sparse_kernel, sparse_rank)


def check_commute(mats: Sequence[Matrix]) -> bool:
    """True when all the matrices pairwise commute."""
    for a, b in combinations(mats, 2):
        if a @ b != b @ a:
            return False
    return True


class CommutingTuple:
    """An n-tuple of pairwise commuting d x d rational matrices."""

    def __init__(self, matrices: Sequence, check: bool = True):
        mats = tuple(m if isinstance(m, Matrix) else Matrix(m) for m in matrices)
        if not mats:
            raise DimensionMismatch("need at least one matrix")
        d = mats[0].nrows
        for m in mats:
            if m.shape != (d, d):
                raise DimensionMismatch("all matrices must be square of the same size")
        if check:
            for (i, a), (j, b) in combinations(enumerate(mats), 2):
                if a @ b != b @ a:
                    raise NotCommutingError(f"A{i + 1} and A{j + 1} do not commute")
        self.matrices = mats

    @property
    def n(self) -> int:
        return len(self.matrices)

    @property
    def d(self) -> int:
        return self.matrices[0].nrows

    def __getitem__(self, i) -> Matrix:
        return self.matrices[i]

    def __iter__(self):
        return iter(self.matrices)

    def __len__(self):
        return len(self.matrices)

    def __eq__(self, other):
        return isinstance(other, CommutingTuple) and self.matrices == other.matrices

    def __hash__(self):
        return hash(self.matrices)

    def __repr__(self):
        return f"CommutingTuple(n={self.n}, d={self.d})"

    def is_nilpotent(self) -> bool:
        return all((m ** self.d).is_zero() for m in self.matrices)

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "matrices": [m.to_strings() for m in self.matrices]}

    @classmethod
    def from_json(cls, data: dict, check: bool = True) -> "CommutingTuple":
        mats = [Matrix(rows) for rows in data["matrices"]]
        t = cls(mats, check=check)
        if "n" in data and data["n"] != t.n:
            raise DimensionMismatch(f"file says n={data['n']} but lists {t.n} matrices")
        if "d" in data and data["d"] != t.d:
            raise DimensionMismatch(f"file says d={data['d']} but matrices are {t.d}x{t.d}")
        return t


# ---------------------------------------------------------------- shapes

class ShapeConstraint:
    """Which matrix entries are allowed to be nonzero.

    ``free[k][r][c]`` is True when entry (r, c) of the k-th matrix is free.
    A single d x d pattern can be given and is then used for every matrix.
    """

    def __init__(self, pattern):
        self.pattern = pattern

    def free(self, k: int, r: int, c: int) -> bool:
        p = self.pattern
        if isinstance(p[0][0], (list, tuple)):
            p = p[k]
        return bool(p[r][c])

    @classmethod
    def from_blocks(cls, sizes: Sequence[int], free_blocks: Iterable[tuple[int, int]]) -> "ShapeConstraint":
        """Pattern whose free entries are the listed (block row, block col) blocks."""
        offs = [sum(sizes[:k]) for k in range(len(sizes))]
        d = sum(sizes)
        pat = [[False] * d for _ in range(d)]
        for bi, bj in free_blocks:
            for i in range(sizes[bi]):
                for j in range(sizes[bj]):
                    pat[offs[bi] + i][offs[bj] + j] = True
        return cls(pat)

    def fits(self, t: CommutingTuple) -> bool:
        return all(not t[k][r, c] or self.free(k, r, c)
                   for k in range(t.n) for r in range(t.d) for c in range(t.d))


def _tangent_system(t: CommutingTuple, shape: ShapeConstraint | None):
    n, d = t.n, t.d
    cols = {}
    for k in range(n):
        for r in range(d):
            for c in range(d):
                if shape is None or shape.free(k, r, c):
                    cols[(k, r, c)] = len(cols)
    rows = []
    A = [m.rows for m in t.matrices]
    nz_rows = [[[(s, x) for s, x in enumerate(A[k][r]) if x] for r in range(d)] for k in range(n)]
    nz_cols = [[[(s, A[k][s][c]) for s in range(d) if A[k][s][c]] for c in range(d)] for k in range(n)]
    for i, j in combinations(range(n), 2):
        for r in range(d):
            for c in range(d):
                row: dict = {}

                def add(key, val):
                    col = cols.get(key)
                    if col is not None:
                        v = row.get(col, 0) + val
                        if v:
                            row[col] = v
                        else:
                            row.pop(col, None)
                # A_i Z_j - Z_j A_i + Z_i A_j - A_j Z_i
                for s, x in nz_rows[i][r]:
                    add((j, s, c), x)
                for s, x in nz_cols[i][c]:
                    add((j, r, s), -x)
                for s, x in nz_cols[j][c]:
                    add((i, r, s), x)
                for s, x in nz_rows[j][r]:
                    add((i, s, c), -x)
                if row:
                    rows.append(row)
    return rows, cols


def tangent_space_dim(t: CommutingTuple, shape: ShapeConstraint | None = None) -> int:
    """Dimension of the tangent space to the commuting variety at t.

    With a shape, only perturbations with that zero pattern are allowed (the
    tangent space of the closed subscheme of tuples of that shape).
    """
    rows, cols = _tangent_system(t, shape)
    return len(cols) - sparse_rank(rows)


def tangent_space_basis(t: CommutingTuple, shape: ShapeConstraint | None = None):
    """Basis of the tangent space as sparse vectors, plus the coordinate map.

    The coordinate map sends (k, r, c) to the column index of entry (r, c)
    of the k-th matrix.
    """
    rows, cols = _tangent_system(t, shape)
    return sparse_kernel(rows, len(cols)), cols


def principal_component_dim(d: int, n: int) -> int:
    """Dimension of the closure of tuples with a diagonalizable member."""
    return d * d + (n - 1) * d


# ---------------------------------------------------------------- cyclic vectors

def krylov_space(t: CommutingTuple, v: Sequence) -> Subspace:
    """Smallest subspace containing v and stable under every A_i."""
    d = t.d
    v = tuple(as_fraction(x) for x in v)
    basis = Subspace(d)
    frontier = [v]
    vecs = []
    while frontier:
        new = []
        for w in frontier:
            if not any(w):
                continue
            trial = Subspace.from_vectors(vecs + [w], d)
            if trial.dim > basis.dim:
                basis = trial
                vecs.append(w)
                new.append(w)
        frontier = [m @ w for w in new for m in t.matrices]
    return basis


def is_stable(t: CommutingTuple, v: Sequence) -> bool:
    """True when v generates K^d as a module over the tuple."""
    return krylov_space(t, v).dim == t.d


def find_cyclic_vector(t: CommutingTuple, seed: int = 0, tries: int = 64):
    """Look for a cyclic vector: standard basis vectors first, then random ones."""
    d = t.d
    for i in range(d):
        e = [0] * d
        e[i] = 1
        if is_stable(t, e):
            return tuple(Fraction(x) for x in e)
    rng = random.Random(seed)
    for _ in range(tries):
        v = [rng.randint(-5, 5) for _ in range(d)]
        if any(v) and is_stable(t, v):
            return tuple(Fraction(x) for x in v)
    raise NotFoundError(f"no cyclic vector found after {d} basis vectors and {tries} random trials")


def hilb_tangent_dim(t: CommutingTuple, seed: int = 0) -> int:
    """Tangent dimension of the Hilbert scheme at the point given by t."""
    find_cyclic_vector(t, seed=seed)
    d = t.d
    return d - d * d + tangent_space_dim(t)


# ---------------------------------------------------------------- nilpotent tuples

def kernel_profile(t: CommutingTuple) -> tuple:
    """Hilbert function of the local algebra of a nilpotent cyclic tuple.

    dim A/n^k equals the dimension of the common kernel of the transposes of
    all products of k of the matrices; the Hilbert function is the sequence
    of successive differences.
    """
    if not t.is_nilpotent():
        raise NotLocalError("kernel profile needs commuting nilpotent matrices")
    d = t.d
    dims = [0]
    prods = {(): Matrix.identity(d)}
    k = 0
    while dims[-1] < d:
        k += 1
        nxt = {}
        for w, p in prods.items():
            start = w[-1] if w else 0
            for i in range(start, t.n):
                nxt[w + (i,)] = t.matrices[i] @ p
        prods = nxt
        rows = [r for p in prods.values() for r in p.transpose().sparse_rows()]
        dims.append(d - sparse_rank(rows))
        if k > d:
            raise NotLocalError("kernel profile did not reach the full dimension")
    return tuple(b - a for a, b in zip(dims, dims[1:]))


def socle_dim(t: CommutingTuple) -> int:
    """Dimension of the common kernel of the matrices."""
    rows = [r for m in t.matrices for r in m.sparse_rows()]
    return t.d - sparse_rank(rows)


def common_kernel(t: CommutingTuple) -> Subspace:
    rows = [r for m in t.matrices for r in m.sparse_rows()]
    return Subspace(t.d, sparse_kernel(rows, t.d))


# ---------------------------------------------------------------- eigen data

@dataclass(frozen=True)
class EigenSummary:
    char_poly: UPoly
    squarefree: bool
    zero_multiplicity: int
    power_kernel_dim: int | None

    def to_json(self) -> dict:
        return {"char_poly": str(self.char_poly), "squarefree": self.squarefree,
                "zero_multiplicity": self.zero_multiplicity,
                "power_kernel_dim": self.power_kernel_dim}


def eigen_summary(m: Matrix, k: int | None = None) -> EigenSummary:
    p = char_poly(m)
    mult = next((i for i, c in enumerate(p.coeffs) if c), 0)
    return EigenSummary(p, is_squarefree(p), mult, power_kernel_dim(m, k) if k else None)


def deformation_path(t: CommutingTuple, directions: Sequence[Matrix], lam, seed: int = 0) -> CommutingTuple:
    """The tuple A_i + lam X_i, after checking it commutes at lam and one more value.

    Commutation is quadratic in lam, so checking at two nonzero values and at 0
    (the input tuple) certifies it along the whole line.
    """
    if len(directions) != t.n:
        raise DimensionMismatch("need one direction per matrix")
    lam = as_fraction(lam)
    rng = random.Random(seed)
    other = Fraction(rng.randint(2, 97), rng.randint(1, 13))
    # two distinct nonzero values besides 0, whatever lam is
    checks = {lam, other, other + 1} - {0}
    for mu in sorted(checks)[:3]:
        mats = [a + x.scale(mu) for a, x in zip(t.matrices, directions)]
        if not check_commute(mats):
            raise NotCommutingError(f"deformed tuple does not commute at lambda={mu}")
    return CommutingTuple([a + x.scale(lam) for a, x in zip(t.matrices, directions)], check=False)
