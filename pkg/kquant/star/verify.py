from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from itertools import product

from kquant.algebra.poly import Poly, monomials_up_to
from kquant.algebra.series import HbarSeries
from kquant.config import Settings, get_settings
from kquant.dgla.hochschild import associator, gerstenhaber_product, mc_residual, modified_d
from kquant.dgla.multidiff import MultiDiffOp
from kquant.models import AssociativityReport, OrderResidual
from kquant.star.assemble import StarProduct

logger = logging.getLogger(__name__)


def propagated_sigma(s: StarProduct) -> list[float]:
    """First-order bound, per hbar order, on how weight std errors move the Maurer-Cartan residual."""
    b = s.deformation()
    sigma = [0.0] * (s.order + 1)
    for contribution in s.contributions:
        error = contribution.record.std_error
        if not error:
            continue
        i = contribution.record.order
        op = contribution.operator
        sigma[i] += error * modified_d(op).max_abs_coefficient()
        for k in range(i + 1, s.order + 1):
            other = b[k - i]
            sigma[k] += error * (
                gerstenhaber_product(op, other).max_abs_coefficient()
                + gerstenhaber_product(other, op).max_abs_coefficient()
            )
    return sigma


def obstruction(b: HbarSeries) -> MultiDiffOp:
    """The part of the next-order Maurer-Cartan residual fixed by the known terms."""
    n = b.order + 1
    total = MultiDiffOp.zero(b[0].dimension, 3)
    for k in range(1, n):
        total = total + gerstenhaber_product(b[k], b[n - k])
    return total


def _evaluate(assoc: HbarSeries, triples: Sequence[tuple[Poly, Poly, Poly]], threads: int) -> list[float]:
    def worst(triple) -> list[float]:
        return [op.apply(triple).max_abs_coefficient() for op in assoc]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(worst, triples))
    return [max((row[k] for row in rows), default=0.0) for k in range(assoc.order + 1)]


def verify_associativity(
    s: StarProduct,
    max_monomial_degree: int = 2,
    *,
    sigmas: float = 3.0,
    settings: Settings | None = None,
) -> AssociativityReport:
    settings = settings or get_settings()
    b = s.deformation()
    residual = mc_residual(b)
    monomials = monomials_up_to(s.dimension, max_monomial_degree)
    triples = list(product(monomials, repeat=3))
    evaluated = _evaluate(associator(s.terms), triples, settings.threads)
    sigma = propagated_sigma(s)
    report = AssociativityReport(order=s.order, triples_checked=len(triples))
    for k in range(1, s.order + 1):
        report.residuals.append(
            OrderResidual(
                order=k,
                max_abs=residual[k].max_abs_coefficient(),
                exact_zero=not residual[k] and not evaluated[k],
                evaluated_max_abs=evaluated[k],
                tolerance=sigmas * sigma[k],
            )
        )
    if s.order >= 1:
        nxt = obstruction(b)
        report.obstruction = OrderResidual(order=s.order + 1, max_abs=nxt.max_abs_coefficient(), exact_zero=not nxt)
    logger.info(
        "associativity to order %d over %d monomial triples: max violation %g",
        s.order,
        len(triples),
        report.max_violation,
    )
    return report
