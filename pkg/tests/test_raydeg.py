import dataclasses

import pytest
from hypothesis import assume, given, strategies as st

from finitealg.apolarity import InverseSystem, hilbert_function
from finitealg.errors import NotLocalError
from finitealg.ideals import FiniteIdeal, colength, equals
from finitealg.poly import DualPolynomial, OperatorPolynomial, contract_monomial, monomials_up_to, unit_monomial
from finitealg.raydeg import (StandardForm, lower_ray_fiber, ray_decompose, ray_order, rayflat_predicted_fiber,
                              shifted_hilbert_function, to_standard_form, upper_ray_fiber,
                              verify_flatness_by_colength)

SF_14211 = {"vars": 4, "s": 4, "c": 2, "g": "x1*x2^(2) + x3^(2)", "W": ["x4"]}


@st.composite
def standard_forms(draw, allow_zero_g=True):
    n = draw(st.integers(2, 3))
    c = draw(st.integers(1, 2))
    s = draw(st.integers(2 * c, 2 * c + 2))
    mons = [m for m in monomials_up_to(n, c + 1) if sum(m) >= 2 and m[0] < c]
    chosen = draw(st.lists(st.sampled_from(mons), max_size=3, unique=True))
    cs = draw(st.lists(st.sampled_from([1, -1, 2]), min_size=len(chosen), max_size=len(chosen)))
    g = DualPolynomial(n, dict(zip(chosen, cs)))
    assume(allow_zero_g or not g.is_zero())
    wmons = [m for m in monomials_up_to(n, c) if sum(m) >= 1 and m[0] < c and m[0] == 0]
    W = tuple(DualPolynomial.monomial(m) for m in draw(st.lists(st.sampled_from(wmons), max_size=1)))
    sf = StandardForm(n, s, c, g, W)
    assume(not sf.problems())
    return sf


@given(standard_forms())
def test_recompose_round_trip(sf):
    rd = ray_decompose(sf.ideal())
    assert equals(rd.recompose(), sf.ideal())


@given(standard_forms())
def test_fiber_identity_and_flatness(sf):
    rd = ray_decompose(sf.ideal())
    for lam in (1, 2, -1):
        assert equals(upper_ray_fiber(rd, lam), rayflat_predicted_fiber(sf, lam))
    assert verify_flatness_by_colength(rd).passed


@given(standard_forms(allow_zero_g=False))
def test_ray_order_bound_and_alpha_kills_g(sf):
    nu = ray_order(sf.ideal())
    assert sf.c + 1 <= nu <= sf.s
    assert contract_monomial(unit_monomial(sf.nvars, 0, nu - 1), sf.g).is_zero()


@given(standard_forms())
def test_shifted_system_drops_one_trailing_one(sf):
    assume(sf.s >= sf.c + 2)
    H = hilbert_function(sf.inverse_system())
    assert shifted_hilbert_function(sf) == H[:-1]


def test_shifted_system_when_g_outgrows_the_shifted_power():
    # s = 2, c = 1: deg g = 2 exceeds s - 1, so the shifted system keeps socle degree 2
    sf = StandardForm.from_json({"vars": 2, "s": 2, "c": 1, "g": "x2^(2)"}).validate()
    assert hilbert_function(sf.inverse_system()) == (1, 2, 1)
    assert shifted_hilbert_function(sf) == (1, 1, 1)


def test_ray_order_exceeds_s_without_g():
    # with g = 0 the curvilinear direction survives one step further: nu = s + 1
    I = FiniteIdeal.annihilator(InverseSystem.parse("x1^(4), x2", 2))
    assert hilbert_function("x1^(4), x2", 2) == (1, 2, 1, 1, 1)
    assert ray_order(I) == 5
    assert ray_order(FiniteIdeal.annihilator(InverseSystem.parse("x1^(4)", 2))) == 5


def test_small_instance():
    sf = StandardForm.from_json({"vars": 2, "s": 4, "c": 1, "g": "x2^(2)"})
    rd = ray_decompose(sf.ideal())
    assert (rd.nu, str(rd.q)) == (4, "a2^2")
    assert sorted(str(j) for j in rd.J) == ["a1*a2", "a2^3"]
    assert colength(upper_ray_fiber(rd, 1)) == 6
    assert equals(upper_ray_fiber(rd, 1), rayflat_predicted_fiber(sf, 1))


def test_catalogue_instance():
    sf = StandardForm.from_json(SF_14211).validate()
    I = sf.ideal()
    assert colength(I) == 9
    rd = ray_decompose(I)
    assert rd.nu == 3 and str(rd.q) == "a2^2"
    rep = verify_flatness_by_colength(rd, [0, 1, 2, -1])
    assert rep.passed and rep.reference == 9
    assert shifted_hilbert_function(sf) == (1, 4, 2, 1)
    # the lower family is only reported; here it is not flat
    assert [colength(lower_ray_fiber(rd, lam)) for lam in (0, 1, 2, -1)] == [9, 7, 7, 7]


def test_broken_witness_fails_flatness():
    rd = ray_decompose(StandardForm.from_json(SF_14211).ideal())
    bad = dataclasses.replace(rd, q=rd.q + OperatorPolynomial.parse("a1", 4))
    rep = verify_flatness_by_colength(bad)
    assert not rep.passed
    assert rep.offending


def test_standard_form_validation():
    with pytest.raises(ValueError):
        StandardForm.from_json({"vars": 2, "s": 4, "c": 1, "g": "x1^(2)"}).validate()
    with pytest.raises(ValueError):
        rayflat_predicted_fiber(StandardForm.from_json(SF_14211), 0)
    sf = StandardForm.from_json(SF_14211)
    assert StandardForm.from_json(sf.to_json()) == sf


def test_to_standard_form_undoes_a_shear():
    E = InverseSystem.parse("(x1+x2)^(4) + x2^(2)", 2)
    sf = to_standard_form(E)
    assert not sf.problems()
    assert (sf.s, sf.c) == (4, 1)
    assert hilbert_function(sf.inverse_system()) == hilbert_function(E)
    assert to_standard_form(InverseSystem.parse("x1^(3)", 1)).g.is_zero()


def test_ray_needs_local_ideal():
    with pytest.raises(NotLocalError):
        ray_order(FiniteIdeal.point([1, 0]))
