"""Exact rewrite identities, cancellation, degree bounds and numeric
consistency of the reduction engine against the quadrature oracle."""

from fractions import Fraction

import pytest

from isochrone.errors import DomainError
from isochrone.exactpoly import GeneratorIndex, RationalPoly
from isochrone.elliptic import eval_I_h
from isochrone.perturbation import PerturbationSpec
from isochrone.quadrature import quad_Iij
from isochrone.reduction import (
    BasisCombo,
    assemble_I,
    degree_profile,
    reduce_k1,
    reduce_k3,
    rewrite_25,
    rewrite_26,
)

F = Fraction


def combo_dict(combo):
    return {(g.i, g.j): poly for g, poly in combo.terms}


def test_first_power_cubic_identity_exact():
    # I_{3,1} = -I_{0,1} - I_{1,1} - 4/3 I_{0,3} - I_{2,1}, exactly
    c = reduce_k1(3)
    assert c.p01 == RationalPoly.constant(-1)
    assert c.p11 == RationalPoly.constant(-1)
    assert c.p21 == RationalPoly.constant(-1)
    assert c.p03 == RationalPoly.constant(F(-4, 3))
    assert c.p31.is_zero()


def test_cubic_power_identities_exact():
    # the two frozen third-power expansions, coefficient for coefficient
    d2 = combo_dict(reduce_k3(2))
    assert d2[(1, 3)] == RationalPoly.constant(2)
    assert d2[(0, 3)] == RationalPoly.constant(F(-3, 4))
    assert d2[(2, 1)] == RationalPoly.linear(3, F(9, 16))  # (3/16)(16h+3)
    assert d2[(0, 1)] == RationalPoly.constant(F(-3, 16))
    assert d2[(1, 1)] == RationalPoly.constant(F(3, 16))
    assert d2[(3, 1)] == RationalPoly.constant(F(3, 16))
    assert set(d2) == {(1, 3), (0, 3), (2, 1), (0, 1), (1, 1), (3, 1)}

    d3 = combo_dict(reduce_k3(3))
    assert d3[(1, 3)] == RationalPoly.constant(3)
    assert d3[(0, 3)] == RationalPoly.constant(F(-27, 20))
    assert d3[(3, 1)] == RationalPoly.linear(F(12, 5), F(63, 80))  # (3/80)(64h+21)
    assert d3[(2, 1)] == RationalPoly.linear(F(27, 5), F(93, 80))  # (3/80)(144h+31)
    assert d3[(0, 1)] == RationalPoly.constant(F(-27, 80))
    assert d3[(1, 1)] == RationalPoly.constant(F(3, 16))
    assert d3[(4, 1)] == RationalPoly.constant(F(3, 20))
    assert set(d3) == {(1, 3), (0, 3), (3, 1), (2, 1), (0, 1), (1, 1), (4, 1)}


def test_third_power_seed_identity_exact():
    # I_{1,3} = (1/4)(16h+3) I_{1,1} + 7/3 I_{0,3} + 1/4 I_{2,1}
    #           - I_{-1,3} + 1/4 I_{0,1} - 1/4 I_{-1,1}
    d = combo_dict(rewrite_26(1, 3))
    assert d[(1, 1)] == RationalPoly.linear(4, F(3, 4))
    assert d[(0, 3)] == RationalPoly.constant(F(7, 3))
    assert d[(2, 1)] == RationalPoly.constant(F(1, 4))
    assert d[(-1, 3)] == RationalPoly.constant(-1)
    assert d[(0, 1)] == RationalPoly.constant(F(1, 4))
    assert d[(-1, 1)] == RationalPoly.constant(F(-1, 4))


@pytest.mark.parametrize("k", range(3, 26))
def test_cancellation_and_degree_bounds(k):
    # extended generators must cancel (reduce_k1 raises otherwise) and
    # the coefficient degrees obey the floor((k-3)/2) / floor((k-2)/2) caps
    c = reduce_k1(k)
    dp = degree_profile(c)
    cap_a = (k - 3) // 2
    cap_s = (k - 2) // 2
    assert dp[0] <= cap_a  # I01
    assert dp[1] <= cap_a  # I11
    assert dp[3] <= cap_a  # I03 (or I31) coefficient
    assert dp[2] <= cap_s  # I21


@pytest.mark.parametrize("k", [3, 5, 8, 11])
@pytest.mark.parametrize("h", [0.2, 4.0 / 9.0, 2.5])
def test_reduction_matches_oracle(k, h):
    v = eval_I_h(reduce_k1(k), h)
    q = quad_Iij(k, 1, h)
    assert abs(v - q) <= 1e-8 * (1.0 + abs(q))


def test_form_conversion_round_trip():
    c = reduce_k1(7)
    back = c.to_p31_form().to_p03_form()
    assert back.p01 == c.p01
    assert back.p11 == c.p11
    assert back.p21 == c.p21
    assert back.p03 == c.p03
    # both forms evaluate identically
    for h in (0.3, 1.7):
        assert eval_I_h(c, h) == pytest.approx(eval_I_h(c.to_p31_form(), h), rel=1e-12)


def test_rewrite_domain_errors():
    with pytest.raises(DomainError):
        rewrite_25(2, 1)  # would reach indices below -1
    with pytest.raises(DomainError):
        rewrite_25(3, 2)  # even power
    with pytest.raises(DomainError):
        rewrite_26(1, 1)  # j must be >= 3
    with pytest.raises(DomainError):
        reduce_k1(-1)
    with pytest.raises(DomainError):
        reduce_k3(1)


def test_assemble_linear_in_coefficients():
    s1 = PerturbationSpec.from_coeffs([1.0, 0.0, 0.0, 0.0])
    s2 = PerturbationSpec.from_coeffs([0.0, 0.0, 0.0, 1.0])
    s12 = PerturbationSpec.from_coeffs([1.0, 0.0, 0.0, 1.0])
    total = assemble_I(s1) + assemble_I(s2)
    combined = assemble_I(s12)
    for h in (0.3, 1.0, 4.0):
        assert eval_I_h(total, h) == pytest.approx(eval_I_h(combined, h), rel=1e-13)


def test_assemble_halves_coefficients():
    # I = (1/2) sum a_i I_{i,1}; for a = (2, 0, 0) the combination is I_{0,1}
    c = assemble_I(PerturbationSpec.from_coeffs([2.0, 0.0, 0.0]))
    c = c.to_p03_form()
    assert c.p01 == RationalPoly.constant(1)
    assert c.p11.is_zero() and c.p21.is_zero() and c.p03.is_zero()


def test_mixed_form_addition_guard():
    one = RationalPoly.constant(1)
    with pytest.raises(Exception):
        BasisCombo.make(p31=one, p03=one)
