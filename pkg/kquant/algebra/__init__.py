"""Exact coefficient arithmetic: Gaussian rationals, polynomials and hbar-series."""

from kquant.algebra.poly import (
    Poly,
    coordinates,
    monomials_up_to,
    partial,
    poly_add,
    poly_eval,
    poly_mul,
    poly_scale,
)
from kquant.algebra.scalar import I, ONE, ZERO, Scalar
from kquant.algebra.series import HbarSeries, convolve, scalar_series, series_mul

__all__ = [
    "I",
    "ONE",
    "ZERO",
    "HbarSeries",
    "Poly",
    "Scalar",
    "convolve",
    "coordinates",
    "monomials_up_to",
    "partial",
    "poly_add",
    "poly_eval",
    "poly_mul",
    "poly_scale",
    "scalar_series",
    "series_mul",
]
