from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from finitealg.exactalg import (Matrix, Subspace, UPoly, char_poly, determinant, echelon, is_squarefree,
                                kernel, power_kernel_dim, rank, rref, solve, sparse_kernel, sparse_rank)

small = st.integers(-4, 4)
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def matrices(draw, max_rows=5, max_cols=5, square=False, elements=small):
    r = draw(st.integers(1, max_rows))
    c = r if square else draw(st.integers(1, max_cols))
    return Matrix([[draw(elements) for _ in range(c)] for _ in range(r)])


def to_sympy(m: Matrix):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m.rows])


@given(matrices(elements=fracs))
def test_rank_matches_sympy(m):
    assert rank(m) == to_sympy(m).rank()


@given(matrices(square=True))
def test_determinant_matches_sympy(m):
    assert determinant(m) == Fraction(str(to_sympy(m).det()))


@given(matrices(square=True, max_rows=6))
def test_char_poly_matches_sympy(m):
    lam = sympy.Symbol("t")
    expected = sympy.Poly(to_sympy(m).charpoly(lam).as_expr(), lam).all_coeffs()[::-1]
    assert char_poly(m).coeffs == tuple(Fraction(str(c)) for c in expected)


@given(matrices(elements=fracs))
def test_rank_nullity(m):
    K = kernel(m)
    assert rank(m) + K.dim == m.ncols
    for v in K.basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m.rows)


@given(matrices(square=True, max_rows=4))
def test_cayley_hamilton(m):
    p = char_poly(m)
    acc = Matrix.zeros(m.nrows)
    power = Matrix.identity(m.nrows)
    for c in p.coeffs:
        acc = acc + power.scale(c)
        power = power @ m
    assert acc.is_zero()


@given(st.lists(st.dictionaries(st.integers(0, 7), small, max_size=5), max_size=6))
def test_sparse_rank_equals_dense(rows):
    dense = Matrix([[r.get(j, 0) for j in range(8)] for r in rows]) if rows else None
    assert sparse_rank(rows) == (rank(dense) if rows else 0)
    for v in sparse_kernel(rows, 8):
        assert all(sum(c * v.get(j, 0) for j, c in r.items()) == 0 for r in rows)


def test_echelon_is_fraction_free():
    rows = [{0: Fraction(1, 2), 1: Fraction(1, 3)}, {0: 2, 1: 5}]
    for r in echelon(rows):
        assert all(isinstance(x, int) for x in r.values())
    assert rref(rows) == [{0: 1}, {1: 1}]


def test_solve():
    m = Matrix([[1, 2], [3, 4]])
    assert solve(m, [5, 6]) == (Fraction(-4), Fraction(9, 2))
    assert solve(Matrix([[1, 1], [1, 1]]), [1, 2]) is None


def test_subspace_operations():
    U = Subspace.from_vectors([[1, 0, 0], [0, 1, 0]], 3)
    V = Subspace.from_vectors([[0, 1, 0], [0, 0, 1]], 3)
    assert U.intersect(V).dim == 1
    assert U.intersect(V).is_subspace_of(U)
    assert U.contains([2, 3, 0]) and not U.contains([0, 0, 1])


def test_upoly_squarefree():
    assert is_squarefree(UPoly([0, -1, 0, 0, 0, 0, 0, 0, 0, 1]))  # t^9 - t
    assert not is_squarefree(UPoly([1, -2, 1]))  # (t - 1)^2
    assert UPoly([1, 2, 1]).gcd(UPoly([1, 1])) == UPoly([1, 1])


def test_power_kernel_dim_nilpotent_jordan_block():
    J = Matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert [power_kernel_dim(J, k) for k in range(4)] == [0, 1, 2, 3]


def test_shape_errors():
    with pytest.raises(Exception):
        Matrix([[1, 2]]) @ Matrix([[1, 2]])
