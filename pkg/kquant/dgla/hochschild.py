"""Hochschild differential, Gerstenhaber product and bracket on polydifferential operators.

Degrees are always shifted: an operator of arity m has degree m - 1.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from itertools import permutations, product
from math import factorial, prod

from kquant.algebra.poly import Exponent, Poly
from kquant.algebra.series import HbarSeries, convolve
from kquant.dgla.multidiff import Derivs, MultiDiffOp, mu
from kquant.dgla.signs import permutation_sign
from kquant.exceptions import AxisOutOfRangeError, DimensionMismatchError, TruncationError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=4096)
def _compositions(total: int, parts: int) -> tuple[tuple[int, ...], ...]:
    if parts == 1:
        return ((total,),)
    return tuple((head, *rest) for head in range(total + 1) for rest in _compositions(total - head, parts - 1))


@lru_cache(maxsize=4096)
def leibniz_splits(alpha: Exponent, parts: int) -> tuple[tuple[int, tuple[Exponent, ...]], ...]:
    """Terms of d^alpha(h_0 h_1 ... h_{parts-1}): (multinomial, derivative on each factor)."""
    per_axis = [_compositions(a, parts) for a in alpha]
    splits = []
    for choice in product(*per_axis):
        coeff = prod(factorial(a) // prod(factorial(c) for c in comp) for a, comp in zip(alpha, choice))
        gammas = tuple(tuple(comp[k] for comp in choice) for k in range(parts))
        splits.append((coeff, gammas))
    return tuple(splits)


def _add(alpha: Exponent, beta: Exponent) -> Exponent:
    return tuple(a + b for a, b in zip(alpha, beta))


def insert(f: MultiDiffOp, i: int, g: MultiDiffOp) -> MultiDiffOp:
    """f •_i g: feed the output of g into the i-th (0-based) argument of f."""
    if f.dimension != g.dimension:
        msg = f"dimension mismatch: {f.dimension} vs {g.dimension}"
        raise DimensionMismatchError(msg)
    if not 0 <= i < f.arity:
        msg = f"insertion slot {i} outside 0..{f.arity - 1}"
        raise AxisOutOfRangeError(msg)
    arity = f.arity + g.arity - 1
    terms: dict[Derivs, Poly] = {}
    for f_derivs, f_coeff in f.items():
        alpha = f_derivs[i]
        for g_derivs, g_coeff in g.items():
            for multinomial, gammas in leibniz_splits(alpha, g.arity + 1):
                coeff = g_coeff.derivative(gammas[0])
                if not coeff:
                    continue
                inner = tuple(_add(beta, gamma) for beta, gamma in zip(g_derivs, gammas[1:]))
                derivs = f_derivs[:i] + inner + f_derivs[i + 1 :]
                value = (f_coeff * coeff).scale(multinomial)
                terms[derivs] = terms[derivs] + value if derivs in terms else value
    return MultiDiffOp(f.dimension, arity, terms)


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def gerstenhaber_product(f: MultiDiffOp, g: MultiDiffOp) -> MultiDiffOp:
    q = g.degree
    result = MultiDiffOp.zero(f.dimension, f.arity + g.arity - 1)
    for i in range(f.arity):
        result = result + insert(f, i, g) * _sign(i * q)
    return result


def gerstenhaber_bracket(f: MultiDiffOp, g: MultiDiffOp) -> MultiDiffOp:
    return gerstenhaber_product(f, g) - gerstenhaber_product(g, f) * _sign(f.degree * g.degree)


def hochschild_delta(f: MultiDiffOp) -> MultiDiffOp:
    m = mu(f.dimension)
    p = f.arity
    result = insert(m, 1, f) + insert(m, 0, f) * _sign(p + 1)
    for r in range(1, p + 1):
        result = result + insert(f, r - 1, m) * _sign(r)
    return result


def modified_d(f: MultiDiffOp) -> MultiDiffOp:
    """d_H f = (-1)^(arity+1) delta f, which equals [mu, f]_G."""
    return hochschild_delta(f) * _sign(f.arity + 1)


def alternation(f: MultiDiffOp) -> MultiDiffOp:
    """sum over sigma of sign(sigma) f(u_sigma(1), ..., u_sigma(m)); it kills every coboundary delta g."""
    terms: dict[Derivs, Poly] = {}
    for sigma in permutations(range(f.arity)):
        sign = permutation_sign(sigma)
        for derivs, coeff in f.items():
            moved: list[Exponent] = [()] * f.arity
            for slot, alpha in enumerate(derivs):
                moved[sigma[slot]] = alpha
            key = tuple(moved)
            value = coeff if sign > 0 else -coeff
            terms[key] = terms[key] + value if key in terms else value
    return MultiDiffOp(f.dimension, f.arity, terms)


def series_bracket(a: HbarSeries, b: HbarSeries) -> HbarSeries:
    return convolve(a, b, gerstenhaber_bracket)


def series_insert(a: HbarSeries, i: int, b: HbarSeries) -> HbarSeries:
    return convolve(a, b, lambda f, g: insert(f, i, g))


def _check_deformation(b: HbarSeries):
    if b[0]:
        msg = "deformation series must have zero hbar^0 part"
        raise TruncationError(msg)


def mc_residual(b: HbarSeries) -> HbarSeries:
    """d_H B + 1/2 [B, B]_G, order by order."""
    _check_deformation(b)
    d = b[0].dimension
    coeffs = []
    for n in range(b.order + 1):
        total = modified_d(b[n])
        for k in range(1, n):
            total = total + gerstenhaber_product(b[k], b[n - k])
        coeffs.append(total)
    logger.debug("computed Maurer-Cartan residual in dimension %d to order %d", d, b.order)
    return HbarSeries(coeffs)


def associator(star: HbarSeries) -> HbarSeries:
    """(f*g)*h - f*(g*h) as a series of arity-3 operators."""
    left = series_insert(star, 0, star)
    right = series_insert(star, 1, star)
    return left - right


def deformation_of(star: HbarSeries) -> HbarSeries:
    """Strip the pointwise product from a star product series."""
    m = mu(star[0].dimension)
    if star[0] != m:
        msg = "star product must start with the pointwise product"
        raise TruncationError(msg)
    return HbarSeries([star[0] * 0, *star.coeffs[1:]])


def star_of(b: HbarSeries) -> HbarSeries:
    _check_deformation(b)
    return HbarSeries([mu(b[0].dimension), *b.coeffs[1:]])


