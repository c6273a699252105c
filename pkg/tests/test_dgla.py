from fractions import Fraction

import pytest

from kquant.algebra.poly import Poly, monomials_up_to
from kquant.algebra.series import HbarSeries
from kquant.dgla.gauge import GaugeElement, bch, exp_operator, gauge_act
from kquant.dgla.hochschild import (
    alternation,
    associator,
    deformation_of,
    gerstenhaber_bracket,
    gerstenhaber_product,
    hochschild_delta,
    insert,
    mc_residual,
    modified_d,
    star_of,
)
from kquant.dgla.multidiff import MultiDiffOp, mu
from kquant.dgla.signs import decalage_sign, koszul_sign_sym, permutation_sign, shuffles
from kquant.exceptions import ArityMismatchError, TruncationError
from kquant.generators import random_deformation, random_gauge, random_operator
from kquant.polyvector import PolyVectorField
from kquant.weyl import moyal_operator


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def test_mu_multiplies():
    x, y = Poly.variable(2, 1), Poly.variable(2, 2)
    assert mu(2)(x, y) == x * y


def test_insert_feeds_output_into_slot():
    d = 1
    x = Poly.variable(d, 1)
    derivative = MultiDiffOp.partial_op(d, 1)
    op = insert(mu(d), 0, derivative)
    assert op(x**2, x) == Poly.monomial(d, (2,), 2)


def test_delta_squared_vanishes(rng):
    for _ in range(40):
        f = random_operator(rng, rng.randint(1, 3), rng.randint(0, 3))
        assert not hochschild_delta(hochschild_delta(f))


def test_d_is_bracket_with_mu(rng):
    for _ in range(40):
        d = rng.randint(1, 3)
        f = random_operator(rng, d, rng.randint(0, 3))
        assert modified_d(f) == gerstenhaber_bracket(mu(d), f)


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_gerstenhaber_skew_symmetry_by_arity(rng, p, q):
    for _ in range(5):
        d = rng.randint(1, 2)
        f, g = random_operator(rng, d, p), random_operator(rng, d, q)
        assert gerstenhaber_bracket(f, g) == -gerstenhaber_bracket(g, f) * _sign(f.degree * g.degree)


@pytest.mark.parametrize("arities", [(1, 1, 3), (1, 2, 3), (2, 2, 3), (2, 3, 3), (3, 3, 3), (3, 2, 1)])
def test_gerstenhaber_jacobi_by_arity(rng, arities):
    for _ in range(3):
        d = rng.randint(1, 2)
        f, g, h = (random_operator(rng, d, arity, terms=1) for arity in arities)
        p, q, r = f.degree, g.degree, h.degree
        total = (
            gerstenhaber_bracket(f, gerstenhaber_bracket(g, h)) * _sign(p * r)
            + gerstenhaber_bracket(g, gerstenhaber_bracket(h, f)) * _sign(q * p)
            + gerstenhaber_bracket(h, gerstenhaber_bracket(f, g)) * _sign(r * q)
        )
        assert not total


@pytest.mark.parametrize(("p", "q"), [(1, 3), (3, 1), (2, 3), (3, 2), (3, 3)])
def test_d_is_a_derivation_of_the_bracket(rng, p, q):
    for _ in range(5):
        d = rng.randint(1, 2)
        f, g = random_operator(rng, d, p), random_operator(rng, d, q)
        lhs = modified_d(gerstenhaber_bracket(f, g))
        rhs = gerstenhaber_bracket(modified_d(f), g) + gerstenhaber_bracket(f, modified_d(g)) * _sign(f.degree)
        assert lhs == rhs


@pytest.mark.parametrize("arity", [0, 1, 2, 3])
def test_alternation_kills_coboundaries(rng, arity):
    for _ in range(10):
        f = random_operator(rng, rng.randint(1, 3), arity)
        assert not alternation(hochschild_delta(f))


def test_alternation_of_a_skew_operator_doubles_it():
    d = 2
    dx, dy = (1, 0), (0, 1)
    skew = MultiDiffOp(d, 2, [((dx, dy), Poly.one(d)), ((dy, dx), -Poly.one(d))])
    assert alternation(skew) == skew * 2


def test_mu_bracket_with_itself_vanishes():
    assert not gerstenhaber_bracket(mu(2), mu(2))
    assert not gerstenhaber_product(mu(3), mu(3))


def test_residual_equals_associator(rng):
    for _ in range(20):
        b = random_deformation(rng, rng.randint(1, 3), 2)
        assert mc_residual(b) == associator(star_of(b))


def test_moyal_is_maurer_cartan():
    star = moyal_operator(PolyVectorField.standard_symplectic(1), 3, imaginary=False)
    assert not mc_residual(deformation_of(star))
    assert not associator(star)


def test_deformation_needs_pointwise_product():
    star = HbarSeries([MultiDiffOp.zero(2, 2), MultiDiffOp.zero(2, 2)])
    with pytest.raises(TruncationError):
        deformation_of(star)
    with pytest.raises(TruncationError):
        star_of(HbarSeries([mu(2)]))


def test_gauge_action_keeps_solutions(rng):
    b = deformation_of(moyal_operator(PolyVectorField.standard_symplectic(1), 2, imaginary=False))
    for _ in range(5):
        moved = gauge_act(random_gauge(rng, 2, 2), b)
        assert not mc_residual(moved)


def test_gauge_action_order_mismatch(rng):
    b = random_deformation(rng, 2, 2)
    with pytest.raises(TruncationError):
        gauge_act(random_gauge(rng, 2, 1), b)


def test_gauge_generator_rejects_wrong_arity():
    with pytest.raises(ArityMismatchError):
        GaugeElement(HbarSeries([MultiDiffOp.zero(1, 2), MultiDiffOp.zero(1, 2)]))
    with pytest.raises(TruncationError):
        GaugeElement(HbarSeries([MultiDiffOp.identity(1)]))


def test_bch_composes_gauge_actions(rng):
    b = random_deformation(rng, 2, 2)
    x, y = random_gauge(rng, 2, 2), random_gauge(rng, 2, 2)
    # the adjoint action reverses the order of composition
    assert gauge_act(bch(y, x), b) == gauge_act(x, gauge_act(y, b))


def test_exp_of_zero_is_identity():
    assert exp_operator(GaugeElement.zero(2, 3)) == HbarSeries.constant(MultiDiffOp.identity(2), 3)


def test_exp_operator_first_order(rng):
    x = random_gauge(rng, 2, 2)
    e = exp_operator(x)
    assert e[0] == MultiDiffOp.identity(2)
    assert e[1] == x.generator[1]
    assert e[2] == x.generator[2] + (insert(x.generator[1], 0, x.generator[1]) * Fraction(1, 2))


@pytest.mark.parametrize(
    ("sigma", "sign"),
    [
        ((0, 1, 2), 1),
        ((1, 0, 2), -1),
        ((1, 2, 0), 1),
        ((2, 1, 0), -1),
    ],
)
def test_permutation_sign(sigma, sign):
    assert permutation_sign(sigma) == sign


def test_koszul_sign_only_counts_odd_swaps():
    assert koszul_sign_sym((1, 1), (1, 0)) == -1
    assert koszul_sign_sym((2, 1), (1, 0)) == 1


def test_shuffle_count():
    assert len(shuffles(2, 4)) == 6
    assert len(shuffles(0, 3)) == 1


def test_operators_annihilating_constants(rng):
    for _ in range(10):
        op = random_operator(rng, 2, 1, unital=True)
        assert op.annihilates_constants()
        assert not op(Poly.one(2))
    for f in monomials_up_to(2, 1):
        assert MultiDiffOp.identity(2)(f) == f


@pytest.mark.parametrize(
    ("degrees", "sign"),
    [
        ((1, 1), 1),
        ((2, 2), -1),
        ((2, 1), -1),
        ((1, 2), 1),
    ],
)
def test_decalage_sign(degrees, sign):
    assert decalage_sign(degrees) == sign
