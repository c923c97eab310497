from fractions import Fraction

import pytest

from core.errors import InvalidParameters
from core.rational_gf import Polynomial, RationalGF


def d8_b():
    """(1 - t) / ((1 - 2t)(1 - 4t))"""
    return RationalGF(Polynomial([1, -1]), {2: 1, 4: 1})


def test_geometric_series():
    assert RationalGF.geometric(2).integer_coefficients(3) == [1, 2, 4, 8]
    assert RationalGF.geometric(3, exponent=2).integer_coefficients(2) == [1, 6, 27]


def test_series_of_a_quotient():
    assert d8_b().integer_coefficients(3) == [1, 5, 22, 92]
    assert d8_b().coefficient(2) == 22


def test_common_factors_cancel():
    f = RationalGF(Polynomial([1, -2]), {2: 1})
    assert f == RationalGF.constant(1)
    assert f == 1
    assert f.poles == ()


def test_sum_and_product():
    g = RationalGF.geometric(2)
    assert g + g == RationalGF.geometric(2, 2)
    assert g * RationalGF.geometric(4) - g == RationalGF.geometric(4, 2) - RationalGF.geometric(2)
    assert (g - g).is_zero()


def test_times_t_shifts_the_series():
    assert RationalGF.geometric(2).times_t().integer_coefficients(3) == [0, 1, 2, 4]


def test_rational_poles_need_normalized_functions():
    with pytest.raises(InvalidParameters):
        RationalGF.geometric(Fraction(1, 2))
    f = RationalGF.geometric(Fraction(1, 2), normalized=True)
    assert f.coefficients(2) == [1, Fraction(1, 2), Fraction(1, 4)]


def test_normalize_substitutes_t_over_order():
    assert RationalGF.geometric(8).normalize(8) == RationalGF.geometric(1, normalized=True)
    half = d8_b().normalize(8)
    assert half.coefficient(1) == Fraction(5, 8)
    with pytest.raises(InvalidParameters):
        d8_b().normalize(0)


def test_normalized_coefficients_scale():
    f = d8_b()
    g = f.normalize(8)
    for k, (a, b) in enumerate(zip(f.coefficients(4), g.coefficients(4))):
        assert b == a / Fraction(8) ** k


def test_partial_fractions():
    pf = d8_b().partial_fractions()
    assert pf.to_list() == [(-1, 2, 2, 1), (3, 2, 4, 1)]
    assert pf.polynomial.is_zero()
    assert pf.recombine() == d8_b()


def test_partial_fractions_with_repeated_pole_and_polynomial_part():
    f = RationalGF(Polynomial([1, 0, 0, 1]), {2: 2})
    pf = f.partial_fractions()
    assert pf.recombine() == f
    assert not pf.polynomial.is_zero()
    assert {t.exponent for t in pf.terms} <= {1, 2}


def test_partial_fractions_of_normalized_function():
    f = d8_b().normalize(8)
    pf = f.partial_fractions()
    assert pf.to_list() == [(-1, 2, "1/4", 1), (3, 2, "1/2", 1)]
    assert pf.recombine() == f


def test_serialization():
    assert RationalGF.geometric(4).to_dict() == {"numerator": ["1"], "denominator": [[4, 1]]}
    assert d8_b().to_dict() == {"numerator": ["1", "-1"], "denominator": [[2, 1], [4, 1]]}
    assert d8_b().render() == "(1 - t)/((1 - 2t)(1 - 4t))"


def test_render_drops_unit_pole_coefficient():
    assert RationalGF.geometric(1).render() == "1/(1 - t)"
    assert RationalGF.geometric(1, exponent=2).render() == "1/(1 - t)^2"
    assert RationalGF.geometric(1).partial_fractions().render() == "1/(1 - t)"
    pf = d8_b().normalize(8).partial_fractions()
    assert pf.render() == "(-1/2)/(1 - (1/4)t) + (3/2)/(1 - (1/2)t)"
    assert "1t" not in RationalGF.geometric(1, exponent=2).normalize(1).render()


def test_integer_coefficients_reject_fractions():
    with pytest.raises(ArithmeticError):
        RationalGF.geometric(3, Fraction(1, 2)).integer_coefficients(1)
