from fractions import Fraction

import pytest

from kquant.algebra.poly import Poly, monomials_up_to
from kquant.algebra.scalar import I, Scalar
from kquant.algebra.series import HbarSeries, scalar_series
from kquant.exceptions import AxisOutOfRangeError, DimensionMismatchError, TruncationError
from kquant.generators import random_poly


@pytest.mark.parametrize(
    ("dimension", "degree", "count"),
    [
        (1, 3, 4),
        (2, 2, 6),
        (3, 2, 10),
        (4, 2, 15),
    ],
)
def test_monomials_up_to(dimension, degree, count):
    monomials = monomials_up_to(dimension, degree)
    assert len(monomials) == count
    assert len(set(monomials)) == count
    assert max(m.degree() for m in monomials) == degree


def test_binomial_square():
    x, y = Poly.variable(2, 1), Poly.variable(2, 2)
    expected = Poly(2, {(2, 0): 1, (1, 1): 2, (0, 2): 1})
    assert (x + y) ** 2 == expected


def test_ring_axioms_on_random_polys(rng):
    for _ in range(50):
        p, q, r = (random_poly(rng, 3) for _ in range(3))
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r
        point = [Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(3)]
        assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)


def test_derivative_of_monomial():
    p = Poly.monomial(2, (3, 2), Fraction(1, 2))
    assert p.derivative((2, 1)) == Poly.monomial(2, (1, 1), 6)
    assert p.derivative((4, 0)) == Poly.zero(2)
    assert p.partial(2) == Poly.monomial(2, (3, 1))


def test_complex_coefficients():
    p = Poly.monomial(1, (1,), I)
    assert (p * p).coefficient((2,)) == Scalar(-1)


def test_zero_polynomial_has_degree_minus_one():
    assert Poly.zero(3).degree() == -1
    assert not Poly.zero(3)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        Poly.variable(2, 1) + Poly.variable(3, 1)


def test_axis_out_of_range():
    with pytest.raises(AxisOutOfRangeError):
        Poly.variable(2, 3)


def test_series_truncates_to_smaller_order():
    total = scalar_series([1, 2, 3]) + scalar_series([1, 1])
    assert total.order == 1
    assert list(total) == [Scalar(2), Scalar(3)]


def test_series_product():
    product = scalar_series([1, 2]) * scalar_series([1, 1])
    assert list(product) == [Scalar(1), Scalar(3)]


def test_divide_by_hbar():
    series = scalar_series([0, 5, 7])
    assert series.divide_by_hbar() == scalar_series([5, 7])
    with pytest.raises(TruncationError):
        scalar_series([1, 5]).divide_by_hbar()


def test_empty_series_rejected():
    with pytest.raises(TruncationError):
        HbarSeries([])
