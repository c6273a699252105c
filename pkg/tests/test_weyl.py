from fractions import Fraction

import pytest

from kquant.algebra.poly import Poly, coordinates, monomials_up_to
from kquant.algebra.scalar import I, Scalar
from kquant.algebra.series import HbarSeries
from kquant.exceptions import DimensionMismatchError, NotConstantError
from kquant.generators import random_poly
from kquant.polyvector import PolyVectorField, poisson_bracket
from kquant.weyl import (
    WeylOp,
    absorb_imaginary_unit,
    commutator,
    groenewold_poisson_side,
    groenewold_residual,
    moyal_bracket,
    moyal_operator,
    moyal_product,
    restore_imaginary_unit,
    weyl_compose,
    weyl_quantize,
    wigner_symbol,
)

ORIGIN = ((0,), (0,))


def test_canonical_commutation():
    bracket = commutator(WeylOp.q(1, 1), WeylOp.p(1, 1))
    assert bracket.coefficient(*ORIGIN) == (Scalar(0), I)
    assert bracket.divide_by_ihbar() == WeylOp.identity(1)


def test_modes_commute_across_pairs():
    assert not commutator(WeylOp.q(2, 1), WeylOp.p(2, 2))


def test_quantized_qp_is_symmetrized():
    q, p = coordinates(2)
    op = weyl_quantize(q * p)
    assert op.coefficient((1,), (1,)) == (Scalar(1),)
    assert op.coefficient(*ORIGIN) == (Scalar(0), Scalar(0, Fraction(-1, 2)))


def test_wigner_symbol_inverts_quantization(rng):
    for _ in range(20):
        f = random_poly(rng, 2, 4, 4)
        symbol = wigner_symbol(weyl_quantize(f))
        assert symbol[0] == f
        assert not any(symbol[k] for k in range(1, symbol.order + 1))


def test_groenewold_residual_is_minus_three_hbar_squared():
    residual = groenewold_residual((3, 3))
    assert [key for key, _ in residual.items()] == [ORIGIN]
    assert residual.coefficient(*ORIGIN) == (Scalar(0), Scalar(0), Scalar(-3))
    assert not groenewold_poisson_side((3, 3))


@pytest.mark.parametrize("f", monomials_up_to(2, 2))
def test_dirac_rule_holds_for_quadratic_symbols(f):
    for g in monomials_up_to(2, 4):
        quantum = commutator(weyl_quantize(f), weyl_quantize(g)).divide_by_ihbar()
        assert quantum == weyl_quantize(poisson_bracket(f, g), quantum.order)


def test_moyal_product_matches_operator_composition(rng):
    pi = PolyVectorField.standard_symplectic(1)
    for _ in range(10):
        f, g = random_poly(rng, 2), random_poly(rng, 2)
        star = moyal_product(f, g, pi, 2)
        symbol = wigner_symbol(weyl_compose(weyl_quantize(f), weyl_quantize(g)))
        assert all(symbol[k] == star[k] for k in range(3))
        assert not any(symbol[k] for k in range(3, symbol.order + 1))


def test_moyal_bracket_starts_with_poisson_bracket(rng):
    pi = PolyVectorField.standard_symplectic(1)
    q, p = coordinates(2)
    i_hbar = HbarSeries([Poly.zero(2), Poly.constant(2, I), Poly.zero(2)])
    assert moyal_product(q, p, pi, 2) - moyal_product(p, q, pi, 2) == i_hbar
    for _ in range(10):
        f, g = random_poly(rng, 2, 3), random_poly(rng, 2, 3)
        assert moyal_bracket(f, g, pi, 2)[0] == poisson_bracket(f, g)


def test_absorbing_i_gives_the_real_form():
    pi = PolyVectorField.standard_symplectic(2)
    assert absorb_imaginary_unit(moyal_operator(pi, 3)) == moyal_operator(pi, 3, imaginary=False)


def test_restoring_i_gives_the_imaginary_form():
    pi = PolyVectorField.standard_symplectic(2)
    assert restore_imaginary_unit(moyal_operator(pi, 3, imaginary=False)) == moyal_operator(pi, 3)


def test_moyal_needs_constant_bivector(so3):
    with pytest.raises(NotConstantError):
        moyal_operator(so3, 2)


def test_phase_space_is_even_dimensional():
    with pytest.raises(DimensionMismatchError):
        weyl_quantize(Poly.variable(3, 1))
