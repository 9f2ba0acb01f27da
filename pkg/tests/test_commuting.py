import pytest
import sympy
from hypothesis import given, strategies as st

from finitealg.apolarity import InverseSystem, apolar_algebra
from finitealg.commuting import (CommutingTuple, ShapeConstraint, common_kernel, deformation_path, eigen_summary,
                                 find_cyclic_vector, hilb_tangent_dim, is_stable, kernel_profile,
                                 principal_component_dim, socle_dim, tangent_space_dim)
from finitealg.errors import NotCommutingError, NotFoundError, NotLocalError
from finitealg.exactalg import Matrix
from finitealg.ideals import FiniteIdeal
from finitealg.poly import DualPolynomial, monomials_of_degree


def sympy_tangent_dim(t):
    """Kernel dimension of X -> ([A_i, X_j] + [X_i, A_j])_{i<j}, built entrywise in sympy."""
    d, n = t.d, t.n
    syms = [sympy.Matrix(d, d, sympy.symbols(f"x{k}_0:{d * d}")) for k in range(n)]
    A = [sympy.Matrix(m.to_strings()).applyfunc(sympy.Rational) for m in t.matrices]
    eqs = []
    for i in range(n):
        for j in range(i + 1, n):
            eqs += list(A[i] * syms[j] - syms[j] * A[i] + syms[i] * A[j] - A[j] * syms[i])
    allvars = [v for s in syms for v in s]
    if not eqs:
        return len(allvars)
    M = sympy.Matrix([[sympy.diff(e, v) for v in allvars] for e in eqs])
    return len(allvars) - M.rank()


@st.composite
def apolar_tuples(draw, max_d=6):
    n = draw(st.integers(1, 3))
    deg = draw(st.integers(1, 2))
    mons = monomials_of_degree(n, deg)
    chosen = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=3, unique=True))
    cs = draw(st.lists(st.integers(-2, 2).filter(bool), min_size=len(chosen), max_size=len(chosen)))
    A = apolar_algebra(InverseSystem(n, [DualPolynomial(n, dict(zip(chosen, cs)))]))
    return A


@given(apolar_tuples())
def test_tangent_dim_matches_sympy_oracle(A):
    t = A.tuple
    assert tangent_space_dim(t) == sympy_tangent_dim(t)


@given(apolar_tuples())
def test_cyclic_tuple_properties(A):
    t = A.tuple
    assert is_stable(t, A.one)
    assert find_cyclic_vector(t) is not None
    # d - d^2 + dim T is the Hilbert scheme tangent dimension, always >= n*d
    assert hilb_tangent_dim(t) >= t.n * t.d
    assert tangent_space_dim(t) >= principal_component_dim(t.d, t.n)
    assert sum(kernel_profile(t)) == t.d
    assert socle_dim(t) == common_kernel(t).dim


def test_curvilinear_point_is_smooth():
    t = apolar_algebra("x1^(4)", 2).tuple
    assert tangent_space_dim(t) == principal_component_dim(5, 2)
    assert hilb_tangent_dim(t) == 10


def test_kernel_profile_is_hilbert_function():
    A = apolar_algebra("x1*x2, x3*x4, x1*x3+x2*x4", 4)
    assert kernel_profile(A.tuple) == (1, 4, 3)
    assert socle_dim(A.tuple) == 3


def test_principal_component_dim():
    assert principal_component_dim(9, 4) == 108
    assert principal_component_dim(10, 4) == 130


def test_non_commuting_input_rejected():
    with pytest.raises(NotCommutingError):
        CommutingTuple([Matrix([[0, 1], [0, 0]]), Matrix([[0, 0], [1, 0]])])


def test_kernel_profile_needs_nilpotent():
    with pytest.raises(NotLocalError):
        kernel_profile(CommutingTuple([Matrix([[1, 0], [0, 0]])]))


def test_no_cyclic_vector():
    with pytest.raises(NotFoundError):
        find_cyclic_vector(CommutingTuple([Matrix.zeros(2)]), tries=4)


def test_shape_constraint_restricts_tangent():
    t = CommutingTuple([Matrix([[0, 0], [1, 0]])])
    lower = ShapeConstraint.from_blocks([1, 1], [(0, 0), (1, 0), (1, 1)])
    assert tangent_space_dim(t) == 4
    assert tangent_space_dim(t, lower) == 3


def test_deformation_path():
    t = apolar_algebra("x1^(2)", 1).tuple
    X = [Matrix.identity(3)]
    assert deformation_path(t, X, 5).matrices[0] == t.matrices[0] + Matrix.identity(3).scale(5)
    t2 = CommutingTuple([Matrix.zeros(2), Matrix.zeros(2)])
    with pytest.raises(NotCommutingError):
        deformation_path(t2, [Matrix([[0, 1], [0, 0]]), Matrix([[0, 0], [1, 0]])], 0)


def test_eigen_summary():
    e = eigen_summary(Matrix([[0, 1], [0, 0]]), 1)
    assert not e.squarefree and e.zero_multiplicity == 2 and e.power_kernel_dim == 1


def test_tuple_json_round_trip():
    t = FiniteIdeal.parse("a1^2, a2^2", 2).quotient.to_tuple()
    assert CommutingTuple.from_json(t.to_json()) == t
