import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from finitealg.apolarity import (InverseSystem, apolar_algebra, apolar_ideal_piece, diff_closure,
                                 hilbert_function, minimal_generators_in_degree, socle_type)
from finitealg.commuting import check_commute, is_stable
from finitealg.ideals import FiniteIdeal, colength
from finitealg.poly import DualPolynomial, OperatorPolynomial, monomials_of_degree

XS = sympy.symbols("x1:5")


def sympy_hilbert(texts, n):
    """Graded dimensions of the span of all partial derivatives (plain sympy)."""
    exprs = [sympy.sympify(t.replace("^", "**"), locals={f"x{i+1}": XS[i] for i in range(n)}) for t in texts]
    top = max(sympy.Poly(e, *XS[:n]).total_degree() for e in exprs)
    out = []
    for i in range(top + 1):
        derivs = []
        for e in exprs:
            deg = sympy.Poly(e, *XS[:n]).total_degree()
            for mono in itertools.combinations_with_replacement(range(n), deg - i) if deg >= i else []:
                d = sympy.diff(e, *[XS[j] for j in mono]) if mono else e
                if d != 0:
                    derivs.append(sympy.Poly(d, *XS[:n]))
        basis = sorted({m for p in derivs for m in p.monoms()})
        rows = [[p.coeff_monomial(m) for m in basis] for p in derivs]
        out.append(sympy.Matrix(rows).rank() if rows and basis else 0)
    return tuple(out)


@st.composite
def homogeneous_systems(draw):
    n = draw(st.integers(1, 4))
    deg = draw(st.integers(1, 3))
    mons = monomials_of_degree(n, deg)
    gens = []
    for _ in range(draw(st.integers(1, 2))):
        chosen = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=3, unique=True))
        coeffs = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=len(chosen), max_size=len(chosen)))
        gens.append(DualPolynomial(n, dict(zip(chosen, coeffs))))
    return InverseSystem(n, gens)


def test_building_blocks():
    assert hilbert_function("x1*x2, x3*x4, x1*x3+x2*x4", 4) == (1, 4, 3)
    assert hilbert_function("x1*x2, x3*x4, x1*x3+x2*x4+x5^(2)", 5) == (1, 5, 3)
    assert hilbert_function("x1^(3)", 1) == (1, 1, 1, 1)
    assert str(hilbert_function("x1^(4) + x2^(2)", 2)) == "(1,2,1,1,1)"


@given(homogeneous_systems())
def test_hilbert_function_matches_sympy_oracle(E):
    texts = [str(g) for g in E.generators]
    expected = sympy_hilbert(texts, E.nvars)
    got = tuple(hilbert_function(E)) + (0,) * (len(expected) - len(hilbert_function(E)))
    assert got == expected


@given(homogeneous_systems())
def test_colength_of_annihilator_equals_closure_dim(E):
    assert colength(FiniteIdeal.annihilator(E)) == diff_closure(E).dim == hilbert_function(E).colength


@given(homogeneous_systems())
def test_single_form_is_gorenstein(E):
    f = InverseSystem(E.nvars, E.generators[:1])
    h = tuple(hilbert_function(f))
    assert h == h[::-1]
    assert socle_type(f) == {len(h) - 1: 1}


@given(homogeneous_systems())
def test_apolar_algebra_commutes_and_one_is_cyclic(E):
    A = apolar_algebra(E)
    assert check_commute(A.tuple.matrices)
    assert is_stable(A.tuple, A.one)


def test_cubic_apolar_ideal():
    F = "x1^3 + x2^3 + x3^3"
    piece = apolar_ideal_piece(F, 2, 3)
    assert piece.dim == 3
    for g in ("a1*a2", "a1*a3", "a2*a3"):
        assert piece.contains(OperatorPolynomial.parse(g, 3))
    assert apolar_ideal_piece(F, 3, 3).dim == 9
    assert minimal_generators_in_degree(F, 3, 3) == 2
    assert minimal_generators_in_degree(F, 2, 3) == 3
    assert hilbert_function(F, 3) == (1, 3, 3, 1)


def test_socle_type_of_table_block():
    assert socle_type("x1*x2, x3*x4, x1*x3+x2*x4", 4) == {2: 3}
    assert socle_type("x1^2, x2", 2) == {1: 1, 2: 1}


def test_socle_type_needs_homogeneous():
    with pytest.raises(ValueError):
        socle_type("x1^2 + x2", 2)


@given(homogeneous_systems())
def test_graded_duality(E):
    # Ann(E)_k and the degree-k part of the closure are orthogonal complements in R_k
    H = hilbert_function(E)
    for k in range(E.max_degree + 2):
        Hk = H[k] if k < len(H) else 0
        assert apolar_ideal_piece(E, k).dim + Hk == len(monomials_of_degree(E.nvars, k))
