"""Numerical check of the formality equation for one and two polyvector fields.

For bivectors the two-field equation reads

    d_H U_2(a, b) + [U_1 a, U_1 b]_G + U_1([a, b]_SN) = 0,

its diagonal a = b = pi is the hbar^2 Maurer-Cartan equation of the assembled star product.
Alternating over the three arguments removes d_H U_2, so the alternated left-hand side
must vanish exactly whatever weights U_2 was built from.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from itertools import product

from kquant.algebra.poly import Poly
from kquant.config import Settings, get_settings
from kquant.dgla.hochschild import alternation, gerstenhaber_bracket, modified_d
from kquant.dgla.multidiff import MultiDiffOp
from kquant.exceptions import UnsupportedGraphError
from kquant.models import FormalityResult
from kquant.polyvector import PolyVectorField, schouten_nijenhuis
from kquant.star.assemble import WeightSource, graph_contributions, taylor_coefficient

logger = logging.getLogger(__name__)

# absolute slack for float-valued weights
_SLACK = 1e-9


def formality_operator(
    xs: Sequence[PolyVectorField], source: WeightSource | None = None, *, settings: Settings | None = None
) -> tuple[MultiDiffOp, list[tuple[float, MultiDiffOp]]]:
    """The left-hand side of the formality equation and, per Monte-Carlo class, (std error, d_H of its cofactor)."""
    settings = settings or get_settings()
    source = source or WeightSource(settings=settings)
    if len(xs) == 1:
        return modified_d(taylor_coefficient(xs, source, settings=settings)), []
    if len(xs) != 2:
        msg = f"the formality residual is checked for one or two fields, got {len(xs)}"
        raise UnsupportedGraphError(msg)
    if any(x.degree != 2 for x in xs):
        msg = "the two-field formality residual is checked for bivectors"
        raise UnsupportedGraphError(msg)
    contributions = graph_contributions(xs, source, settings=settings)
    u2 = MultiDiffOp.zero(xs[0].dimension, 2)
    for contribution in contributions:
        u2 = u2 + contribution.term
    first, second = (taylor_coefficient([x], source, settings=settings) for x in xs)
    bracket = taylor_coefficient([schouten_nijenhuis(xs[0], xs[1])], source, settings=settings)
    lhs = modified_d(u2) + gerstenhaber_bracket(first, second) + bracket
    errors = [(c.record.std_error, modified_d(c.operator)) for c in contributions if c.record.std_error]
    return lhs, errors


def formality_residual(
    xs: Sequence[PolyVectorField],
    fs: Sequence[Poly],
    source: WeightSource | None = None,
    *,
    sigmas: float = 3.0,
    settings: Settings | None = None,
) -> FormalityResult:
    """Evaluate the formality equation on every tuple of the test functions fs."""
    lhs, errors = formality_operator(xs, source, settings=settings)
    alternated = alternation(lhs).max_abs_coefficient()
    worst, worst_sigma, ok, cases = 0.0, 0.0, alternated <= _SLACK, 0
    for args in product(fs, repeat=lhs.arity):
        value = lhs.apply(args).max_abs_coefficient()
        # class estimates share one seeded stream, so errors add linearly
        sigma = sum(error * op.apply(args).max_abs_coefficient() for error, op in errors)
        ok = ok and value <= sigmas * sigma + _SLACK
        worst, worst_sigma = max(worst, value), max(worst_sigma, sigma)
        cases += 1
    logger.info("formality residual for n=%d over %d cases: %g (sigma %g)", len(xs), cases, worst, worst_sigma)
    if alternated > _SLACK:
        logger.warning("alternated formality residual is %g", alternated)
    return FormalityResult(
        n=len(xs), residual=worst, sigma=worst_sigma, exact=not errors, ok=ok, cases=cases, alternated=alternated
    )
