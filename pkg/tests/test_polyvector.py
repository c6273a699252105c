from fractions import Fraction

import pytest

from kquant.algebra.poly import Poly, coordinates
from kquant.dgla.hochschild import modified_d
from kquant.exceptions import DegreeError, NotPoissonError
from kquant.generators import random_polyvector
from kquant.polyvector import (
    PolyVectorField,
    bivector_bracket,
    diamond,
    hkr,
    is_poisson,
    jacobi_defect,
    lie_bracket,
    poisson_bracket,
    require_poisson,
    schouten_by_definition,
    schouten_nijenhuis,
    wedge,
)


def _sign(exponent):
    return -1 if exponent % 2 else 1


@pytest.fixture()
def not_poisson():
    x2 = Poly.variable(3, 2)
    return PolyVectorField.basis(3, (2, 3), x2) + PolyVectorField.basis(3, (1, 2))


def test_so3_is_poisson(so3):
    ok, residual = is_poisson(so3)
    assert ok
    assert not residual
    assert require_poisson(so3) is so3


def test_so3_brackets(so3):
    x1, x2, x3 = coordinates(3)
    assert bivector_bracket(so3, x1, x2) == x3
    assert bivector_bracket(so3, x2, x3) == x1
    assert bivector_bracket(so3, x3, x1) == x2


def test_not_poisson_is_rejected(not_poisson):
    x1, x2, x3 = coordinates(3)
    assert not is_poisson(not_poisson)[0]
    assert jacobi_defect(not_poisson, x1, x2, x3)
    with pytest.raises(NotPoissonError):
        require_poisson(not_poisson)


def test_canonical_bracket():
    q, p = coordinates(2)
    assert poisson_bracket(q, p) == Poly.one(2)
    assert poisson_bracket(q**3, p**3) == Poly.monomial(2, (2, 2), 9)


def test_wedge_anticommutes_on_vectors():
    d1, d2 = PolyVectorField.basis(3, (1,)), PolyVectorField.basis(3, (2,))
    assert wedge(d1, d2) == -wedge(d2, d1)
    assert not wedge(d1, d1)


def test_repeated_index_vanishes():
    assert not PolyVectorField(2, 2, [((0, 0), 1)])
    with pytest.raises(DegreeError):
        PolyVectorField(2, 2, [((0,), 1)])


def test_hkr_of_bivector_is_half_the_bracket():
    pi = PolyVectorField.standard_symplectic(1)
    q, p = coordinates(2)
    op = hkr(pi)
    assert op.apply((q, p)) == Poly.constant(2, Fraction(1, 2))
    assert op.apply((q, p)) - op.apply((p, q)) == poisson_bracket(q, p)


def test_hkr_is_a_chain_map(rng):
    for _ in range(30):
        d = rng.randint(1, 3)
        x = random_polyvector(rng, d, rng.randint(0, d))
        assert not modified_d(hkr(x))


def test_schouten_skew_symmetry(rng):
    for _ in range(30):
        x, y = (random_polyvector(rng, 3, rng.randint(1, 3)) for _ in range(2))
        assert schouten_nijenhuis(x, y) == -schouten_nijenhuis(y, x) * _sign((x.degree - 1) * (y.degree - 1))


def test_schouten_jacobi(rng):
    for _ in range(20):
        x, y, z = (random_polyvector(rng, 3, rng.randint(1, 2), max_degree=1) for _ in range(3))
        a, b, c = x.degree - 1, y.degree - 1, z.degree - 1
        total = (
            schouten_nijenhuis(x, schouten_nijenhuis(y, z)) * _sign(a * c)
            + schouten_nijenhuis(y, schouten_nijenhuis(z, x)) * _sign(b * a)
            + schouten_nijenhuis(z, schouten_nijenhuis(x, y)) * _sign(c * b)
        )
        assert not total


def test_schouten_leibniz(rng):
    for _ in range(20):
        x, y, z = (random_polyvector(rng, 3, rng.randint(1, 2), max_degree=1) for _ in range(3))
        lhs = schouten_nijenhuis(x, wedge(y, z))
        rhs = wedge(schouten_nijenhuis(x, y), z) + wedge(y, schouten_nijenhuis(x, z)) * _sign((x.degree - 1) * y.degree)
        assert lhs == rhs


def test_schouten_matches_definition_on_decomposables(rng):
    for _ in range(20):
        xs = [random_polyvector(rng, 3, 1) for _ in range(2)]
        ys = [random_polyvector(rng, 3, 1)]
        assert schouten_nijenhuis(wedge(*xs), ys[0]) == schouten_by_definition(xs, ys)


def test_vector_field_bracket_is_lie_bracket(rng):
    for _ in range(20):
        x, y = (random_polyvector(rng, 2, 1, max_degree=1) for _ in range(2))
        assert schouten_nijenhuis(x, y) == lie_bracket(x, y)
        assert diamond(x, y) - diamond(y, x) == lie_bracket(x, y)


def test_diamond_needs_a_vector_on_the_left():
    f = PolyVectorField.function(Poly.variable(2, 1))
    with pytest.raises(DegreeError):
        diamond(f, PolyVectorField.basis(2, (1,)))
