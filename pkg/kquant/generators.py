"""Seeded random operands for the property suites."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from kquant.algebra.poly import Poly
from kquant.algebra.series import HbarSeries
from kquant.dgla.gauge import GaugeElement
from kquant.dgla.multidiff import MultiDiffOp
from kquant.polyvector import PolyVectorField


def rational(rng: random.Random, bound: int = 3) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def multi_index(rng: random.Random, dimension: int, max_degree: int, *, nonzero: bool = False) -> tuple[int, ...]:
    low = 1 if nonzero else 0
    total = rng.randint(low, max(low, max_degree))
    exponent = [0] * dimension
    for _ in range(total):
        exponent[rng.randrange(dimension)] += 1
    return tuple(exponent)


def random_poly(rng: random.Random, dimension: int, max_degree: int = 2, terms: int = 3) -> Poly:
    return Poly(dimension, [(multi_index(rng, dimension, max_degree), rational(rng)) for _ in range(terms)])


def random_operator(
    rng: random.Random,
    dimension: int,
    arity: int,
    *,
    max_order: int = 2,
    coeff_degree: int = 1,
    terms: int = 2,
    unital: bool = False,
) -> MultiDiffOp:
    """A polydifferential operator; unital ones differentiate every argument."""
    return MultiDiffOp(
        dimension,
        arity,
        [
            (
                [multi_index(rng, dimension, max_order, nonzero=unital) for _ in range(arity)],
                random_poly(rng, dimension, coeff_degree, 2),
            )
            for _ in range(terms)
        ],
    )


def random_polyvector(
    rng: random.Random, dimension: int, degree: int, *, max_degree: int = 2, terms: int = 2
) -> PolyVectorField:
    slots = list(combinations(range(dimension), degree))
    return PolyVectorField(
        dimension,
        degree,
        [(rng.choice(slots), random_poly(rng, dimension, max_degree, 2)) for _ in range(terms)] if slots else [],
    )


def random_deformation(rng: random.Random, dimension: int, order: int, **kwargs) -> HbarSeries:
    """A truncated B = sum_{k>=1} hbar^k B_k of bidifferential operators."""
    return HbarSeries(
        [MultiDiffOp.zero(dimension, 2), *(random_operator(rng, dimension, 2, **kwargs) for _ in range(order))]
    )


def random_gauge(rng: random.Random, dimension: int, order: int, **kwargs) -> GaugeElement:
    """A gauge generator whose coefficients annihilate constants."""
    kwargs.setdefault("unital", True)
    return GaugeElement.from_operators(
        [random_operator(rng, dimension, 1, **kwargs) for _ in range(order)],
        order,
    )
