import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from finitealg.apolarity import InverseSystem
from finitealg.errors import InfiniteColengthError, NotLocalError
from finitealg.ideals import (FiniteIdeal, colength, contains, equals, initial_ideal, intersect,
                              local_hilbert_function, minimal_generators, translate)
from finitealg.poly import OperatorPolynomial, monomials_up_to

AS = sympy.symbols("a1:4")


def sympy_colength(gens, n, power):
    """Number of standard monomials of a grevlex Groebner basis (independent oracle)."""
    polys = [sympy.sympify(str(g).replace("^", "**"), locals={f"a{i+1}": AS[i] for i in range(n)}) for g in gens]
    polys += [sympy.prod(AS[i] ** e for i, e in enumerate(m)) for m in itertools.product(range(power + 1), repeat=n)
              if sum(m) == power]
    G = sympy.groebner(polys, *AS[:n], order="grevlex")
    leads = [sympy.Poly(g, *AS[:n]).monoms(order="grevlex")[0] for g in G.exprs]
    count = 0
    for m in itertools.product(range(power + 1), repeat=n):
        if not any(all(a <= b for a, b in zip(l, m)) for l in leads):
            count += 1
    return count


@st.composite
def local_ideals(draw):
    n = draw(st.integers(1, 3))
    power = draw(st.integers(2, 4))
    mons = [m for m in monomials_up_to(n, power) if 0 < sum(m) < power]
    gens = []
    for _ in range(draw(st.integers(0, 3))):
        chosen = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=3, unique=True))
        cs = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=len(chosen), max_size=len(chosen)))
        gens.append(OperatorPolynomial(n, dict(zip(chosen, cs))))
    return FiniteIdeal(n, gens, power), gens, n, power


@given(local_ideals())
def test_colength_matches_groebner_oracle(data):
    I, gens, n, power = data
    assert colength(I) == sympy_colength(gens, n, power)


@given(local_ideals())
def test_local_hilbert_function_sums_to_colength(data):
    I = data[0]
    h = local_hilbert_function(I)
    assert sum(h) == colength(I)
    assert h[0] == 1


@given(local_ideals(), local_ideals())
def test_intersection_contains_products(d1, d2):
    I, J = d1[0], d2[0]
    if I.nvars != J.nvars:
        return
    K = intersect(I, J)
    for f in I.generators[:3]:
        for g in J.generators[:3]:
            assert contains(K, f * g)
    assert colength(K) >= max(colength(I), colength(J))


def test_truncation_certificate():
    I = FiniteIdeal.parse("a1^2-a2^3, a1*a2", 2)
    assert colength(I) == 5
    assert I.truncation_used is not None and I.truncation_used <= 12
    with pytest.raises(InfiniteColengthError):
        colength(FiniteIdeal.parse("a1", 2))


def test_points_and_translation():
    P = intersect(FiniteIdeal.point([1, 2]), FiniteIdeal.point([0, 0]))
    assert colength(P) == 2
    assert contains(P, OperatorPolynomial.parse("a1*a2 - a2", 2))
    T = translate(FiniteIdeal.point([1, 2]), [-1, -2])
    assert equals(T, FiniteIdeal.parse("a1, a2", 2))
    with pytest.raises(NotLocalError):
        local_hilbert_function(FiniteIdeal.point([1, 2]))


def test_disjoint_support_adds_colength():
    E = InverseSystem.parse("x1*x2, x3*x4, x1*x3+x2*x4", 4)
    I = FiniteIdeal.annihilator(E)
    Q = translate(I, [1, 2, 3, 5])
    assert colength(intersect(I, Q)) == 16


def test_initial_ideals():
    I = FiniteIdeal.parse("a1^2-a2^3, a1*a2", 2)
    low = initial_ideal(I, [-1, -1])
    assert equals(low, FiniteIdeal.parse("a1^2, a1*a2, a2^4", 2))
    high = initial_ideal(I, [1, 1])
    assert equals(high, FiniteIdeal.parse("a1*a2, a2^3, a1^3", 2))
    assert colength(low) == colength(high) == colength(I)
    with pytest.raises(ValueError):
        initial_ideal(I, [1, -1])


@given(local_ideals(), st.lists(st.integers(1, 3), min_size=3, max_size=3))
def test_initial_ideal_preserves_colength(data, w):
    I, n = data[0], data[2]
    assert colength(initial_ideal(I, w[:n])) == colength(I)
    assert colength(initial_ideal(I, [-x for x in w[:n]])) == colength(I)


def test_json_round_trip():
    I = FiniteIdeal.from_json({"vars": 2, "generators": ["a1^2", "a1*a2"], "add_power_of_max_ideal": 3})
    J = FiniteIdeal.from_json(I.to_json())
    assert equals(I, J) and colength(J) == 4


def test_minimal_generators():
    low = initial_ideal(FiniteIdeal.parse("a1^2-a2^3, a1*a2", 2), [-1, -1])
    assert sorted(map(str, minimal_generators(low))) == ["a1*a2", "a1^2", "a2^4"]
    E = InverseSystem.parse("x1^3 + x2^3 + x3^3", 3)
    assert len(minimal_generators(FiniteIdeal.annihilator(E))) == 5


@given(local_ideals())
def test_minimal_generators_generate(data):
    I = data[0]
    gens = minimal_generators(I)
    assert len(gens) <= len(I.all_generators())
    assert equals(FiniteIdeal(I.nvars, gens, truncation_cap=I.truncation_cap), I)
