"""Exact linear algebra over the rationals.

Everything here works with ``fractions.Fraction`` entries (ints are accepted
on input).  Elimination is done fraction-free on integer rows: every row is
scaled to a primitive integer vector, and a pivot step replaces ``r`` by
``a*r - b*p`` followed by division by the content.  Rows are stored sparsely
as ``{column: value}`` dicts, which keeps the large but very sparse systems
coming from commuting-matrix tangent spaces cheap.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Row = dict  # column index -> value


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


# ---------------------------------------------------------------- sparse core

def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _int_row(row: Row) -> dict[int, int]:
    """Primitive integer multiple of a rational row, leading entry positive."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = _lcm(den, v.denominator)
    out = {}
    for c, v in row.items():
        if v:
            out[c] = v * den if isinstance(v, int) else int(v * den)
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _combine(r: dict[int, int], p: dict[int, int], col: int) -> dict[int, int]:
    """Eliminate ``col`` from ``r`` using pivot row ``p``."""
    a, b = p[col], r[col]
    g = gcd(a, b)
    a, b = a // g, b // g
    out = {c: a * v for c, v in r.items()} if a != 1 else dict(r)
    for c, v in p.items():
        nv = out.get(c, 0) - b * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return _primitive(out)


def echelon(rows: Iterable[Row]) -> list[dict[int, int]]:
    """Row echelon form of sparse rows, as primitive integer rows.

    The result is sorted by pivot (the smallest column of each row).  Among
    candidate rows sharing a pivot column the sparsest one is used, which keeps
    fill-in low on the structured systems we feed in.
    """
    buckets: dict[int, list] = {}
    for row in rows:
        r = _int_row(row)
        if r:
            buckets.setdefault(min(r), []).append(r)
    out = []
    while buckets:
        col = min(buckets)
        bucket = buckets.pop(col)
        k = min(range(len(bucket)), key=lambda i: len(bucket[i]))
        piv = bucket[k]
        out.append(piv)
        for i, r in enumerate(bucket):
            if i == k:
                continue
            r = _combine(r, piv, col)
            if r:
                buckets.setdefault(min(r), []).append(r)
    return out


def rref(rows: Iterable[Row]) -> list[dict[int, Fraction]]:
    """Reduced row echelon form with unit pivots, sorted by pivot column."""
    ech = echelon(rows)
    pivots = [min(r) for r in ech]
    # back substitution, bottom row first
    for i in range(len(ech) - 1, -1, -1):
        p, pc = ech[i], pivots[i]
        for j in range(i):
            if pc in ech[j]:
                ech[j] = _combine(ech[j], p, pc)
    out = []
    for r in ech:
        lead = r[min(r)]
        out.append({c: Fraction(v, lead) for c, v in r.items()})
    return out


def sparse_rank(rows: Iterable[Row]) -> int:
    return len(echelon(rows))


def sparse_kernel(rows: Iterable[Row], ncols: int) -> list[dict[int, Fraction]]:
    """Basis of the right kernel of a sparse matrix with ``ncols`` columns.

    One vector per free column ``f``: it has a 1 in position ``f``, zeros at
    the other free columns, and whatever the pivots force.
    """
    red = rref(rows)
    pivots = {min(r): r for r in red}
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = {f: Fraction(1)}
        for pc, r in pivots.items():
            x = r.get(f)
            if x:
                v[pc] = -x
        basis.append(v)
    return basis


# ---------------------------------------------------------------- dense matrices

class Matrix:
    """Dense matrix of Fractions.  Treated as immutable."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self.rows = tuple(tuple(as_fraction(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise DimensionMismatch("ragged matrix rows")
        else:
            self.ncols = ncols or 0
        self._hash = None

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> Matrix:
        ncols = nrows if ncols is None else ncols
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: dict) -> Matrix:
        """Build from ``{(row, col): value}`` with 0-based indices."""
        m = [[0] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            m[i][j] = v
        return cls(m, ncols)

    @classmethod
    def block(cls, blocks: Sequence[Sequence], sizes: Sequence[int]) -> Matrix:
        """Square block matrix; ``None`` or 0 entries mean zero blocks."""
        n = sum(sizes)
        offs = [sum(sizes[:k]) for k in range(len(sizes))]
        m = [[Fraction(0)] * n for _ in range(n)]
        for bi, brow in enumerate(blocks):
            for bj, blk in enumerate(brow):
                if blk is None or (not isinstance(blk, Matrix) and blk == 0):
                    continue
                if (blk.nrows, blk.ncols) != (sizes[bi], sizes[bj]):
                    raise DimensionMismatch(f"block ({bi},{bj}) has wrong shape")
                for i in range(blk.nrows):
                    for j in range(blk.ncols):
                        m[offs[bi] + i][offs[bj] + j] = blk.rows[i][j]
        return cls(m, n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self.rows))
        return self._hash

    def __repr__(self):
        return f"Matrix({[[str(x) for x in r] for r in self.rows]})"

    def _check_same(self, other: Matrix):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> Matrix:
        return Matrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> Matrix:
        c = as_fraction(c)
        return Matrix([[c * a for a in r] for r in self.rows], self.ncols)

    def __rmul__(self, c) -> Matrix:
        return self.scale(c)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
            out = []
            for r in self.rows:
                nz = [(k, a) for k, a in enumerate(r) if a]
                out.append([sum((a * col[k] for k, a in nz), Fraction(0)) for col in cols])
            return Matrix(out, other.ncols)
        v = list(other)
        if len(v) != self.ncols:
            raise DimensionMismatch("vector length does not match matrix")
        return tuple(sum((a * b for a, b in zip(r, v) if a), Fraction(0)) for r in self.rows)

    def __pow__(self, k: int) -> Matrix:
        if self.nrows != self.ncols:
            raise DimensionMismatch("power of a non-square matrix")
        result, base = Matrix.identity(self.nrows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> Matrix:
        return Matrix(list(zip(*self.rows)) if self.nrows else [], self.nrows)

    @property
    def T(self) -> Matrix:
        return self.transpose()

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(min(self.shape))), Fraction(0))

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        return [{j: x for j, x in enumerate(r) if x} for r in self.rows]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]


def hstack(mats: Sequence[Matrix]) -> Matrix:
    return Matrix([sum((m.rows[i] for m in mats), ()) for i in range(mats[0].nrows)])


def vstack(mats: Sequence[Matrix]) -> Matrix:
    return Matrix([r for m in mats for r in m.rows], mats[0].ncols)


def rank(m: Matrix) -> int:
    return sparse_rank(m.sparse_rows())


def kernel(m: Matrix) -> Subspace:
    """Right kernel ``{v : m v = 0}`` as a canonical subspace."""
    vecs = sparse_kernel(m.sparse_rows(), m.ncols)
    return Subspace.from_sparse(vecs, m.ncols)


def solve(m: Matrix, b: Sequence) -> tuple | None:
    """One solution of ``m x = b`` (free variables set to 0), or None."""
    n = m.ncols
    rows = []
    for r, bi in zip(m.rows, b):
        row = {j: x for j, x in enumerate(r) if x}
        bi = as_fraction(bi)
        if bi:
            row[n] = bi
        rows.append(row)
    x = [Fraction(0)] * n
    for r in rref(rows):
        pc = min(r)
        if pc == n:
            return None
        x[pc] = r.get(n, Fraction(0))
    return tuple(x)


def determinant(m: Matrix) -> Fraction:
    """Bareiss fraction-free determinant (entries scaled to integers first)."""
    n = m.nrows
    if n != m.ncols:
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    den = 1
    for r in m.rows:
        for x in r:
            den = _lcm(den, x.denominator)
    a = [[int(x * den) for x in r] for r in m.rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], den ** n)


# ---------------------------------------------------------------- subspaces

class Subspace:
    """Subspace of Q^n stored by its reduced row echelon basis.

    The RREF basis is unique, so two subspaces are equal exactly when their
    bases are equal.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, rows: Iterable[dict[int, Fraction]] = ()):
        self.ambient_dim = ambient_dim
        red = rref(rows)
        self.basis = tuple(tuple(r.get(j, Fraction(0)) for j in range(ambient_dim)) for r in red)

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
        rows = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch("vector length differs from ambient dimension")
            rows.append({j: as_fraction(x) for j, x in enumerate(v) if x})
        return cls(ambient_dim, rows)

    @classmethod
    def from_sparse(cls, vectors: Iterable[dict], ambient_dim: int) -> Subspace:
        return cls(ambient_dim, vectors)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def _sparse(self):
        return [{j: x for j, x in enumerate(r) if x} for r in self.basis]

    def contains(self, v: Sequence) -> bool:
        v = [as_fraction(x) for x in v]
        # reduce v against the RREF basis
        for r in self.basis:
            pc = next(j for j, x in enumerate(r) if x)
            c = v[pc]
            if c:
                v = [a - c * b for a, b in zip(v, r)]
        return not any(v)

    def __add__(self, other: Subspace) -> Subspace:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        return Subspace(self.ambient_dim, self._sparse() + other._sparse())

    def complement_annihilator(self) -> Subspace:
        """``{w : <w, v> = 0 for all v}``."""
        vecs = sparse_kernel(self._sparse(), self.ambient_dim)
        return Subspace(self.ambient_dim, vecs)

    def intersect(self, other: Subspace) -> Subspace:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        return (self.complement_annihilator() + other.complement_annihilator()).complement_annihilator()

    __and__ = intersect

    def is_subspace_of(self, other: Subspace) -> bool:
        return all(other.contains(v) for v in self.basis)


# ---------------------------------------------------------------- univariate

class UPoly:
    """Univariate polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_fraction(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = str(abs(c)) + ("*" + mono if mono else "")
            parts.append(("- " if c < 0 else "+ ") + s)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: UPoly) -> UPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UPoly(x + y for x, y in zip(a, b))

    def __neg__(self):
        return UPoly(-x for x in self.coeffs)

    def __sub__(self, other: UPoly) -> UPoly:
        return self + (-other)

    def __mul__(self, other) -> UPoly:
        if not isinstance(other, UPoly):
            return UPoly(as_fraction(other) * x for x in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> UPoly:
        return UPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def divmod(self, other: UPoly) -> tuple[UPoly, UPoly]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(r) - len(other.coeffs) + 1)
        lead = other.coeffs[-1]
        while len(r) >= len(other.coeffs) and any(r):
            shift = len(r) - len(other.coeffs)
            c = r[-1] / lead
            q[shift] = c
            for i, b in enumerate(other.coeffs):
                r[shift + i] -= c * b
            r.pop()
            while r and not r[-1]:
                r.pop()
        return UPoly(q), UPoly(r)

    def monic(self) -> UPoly:
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        return UPoly(c / lead for c in self.coeffs)

    def gcd(self, other: UPoly) -> UPoly:
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic()


def char_poly(m: Matrix) -> UPoly:
    """det(t*I - m) by the Faddeev-LeVerrier recursion."""
    n = m.nrows
    if n != m.ncols:
        raise DimensionMismatch("characteristic polynomial of a non-square matrix")
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = Matrix.identity(n)
    mk = Matrix.zeros(n)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ mk).trace() / k
    return UPoly(coeffs)


def is_squarefree(p: UPoly) -> bool:
    """True when p has no repeated root over an algebraic closure."""
    if p.degree <= 0:
        return True
    return p.gcd(p.derivative()).degree == 0


def power_kernel_dim(m: Matrix, k: int) -> int:
    """dim ker(m^k)."""
    return m.ncols - rank(m ** k)
