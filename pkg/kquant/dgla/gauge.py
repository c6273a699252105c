"""Gauge action of hbar * D_poly^0[[hbar]] on Maurer-Cartan elements."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from kquant.algebra.series import HbarSeries
from kquant.dgla.hochschild import series_bracket, series_insert, star_of
from kquant.dgla.multidiff import MultiDiffOp
from kquant.exceptions import ArityMismatchError, TruncationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaugeElement:
    """A generator x0 in hbar * D_poly^0[[hbar]], truncated at its series order."""

    generator: HbarSeries

    def __post_init__(self):
        if any(op.arity != 1 for op in self.generator):
            msg = "gauge generators are arity-1 operators"
            raise ArityMismatchError(msg)
        if self.generator[0]:
            msg = "gauge generator must have zero hbar^0 part"
            raise TruncationError(msg)

    @classmethod
    def zero(cls, dimension: int, order: int) -> GaugeElement:
        return cls(HbarSeries.constant(MultiDiffOp.zero(dimension, 1), order))

    @classmethod
    def from_operators(cls, ops: list[MultiDiffOp], order: int | None = None) -> GaugeElement:
        """Build hbar*ops[0] + hbar^2*ops[1] + ... up to the given order."""
        order = len(ops) if order is None else order
        zero = ops[0] * 0
        coeffs = [zero] + list(ops[:order]) + [zero] * (order - len(ops))
        return cls(HbarSeries(coeffs[: order + 1]))

    @property
    def dimension(self) -> int:
        return self.generator[0].dimension

    @property
    def order(self) -> int:
        return self.generator.order

    def annihilates_constants(self) -> bool:
        return all(op.annihilates_constants() for op in self.generator)

    def __neg__(self) -> GaugeElement:
        return GaugeElement(-self.generator)

    def __add__(self, other: GaugeElement) -> GaugeElement:
        return GaugeElement(self.generator + other.generator)

    def scale(self, factor) -> GaugeElement:
        return GaugeElement(self.generator * factor)

    def bracket(self, other: GaugeElement) -> GaugeElement:
        return GaugeElement(series_bracket(self.generator, other.generator))


def _exp_ad(y: HbarSeries, x0: HbarSeries) -> HbarSeries:
    """sum_k ad^k(y)/k! with ad(z) = [z, x0]_G; x0 has no hbar^0 part so k <= order suffices."""
    total = y
    term = y
    for k in range(1, y.order + 1):
        term = series_bracket(term, x0)
        if not term:
            break
        total = total + term.scale(Fraction(1, factorial(k)))
    return total


def gauge_act(x0: GaugeElement, b: HbarSeries) -> HbarSeries:
    """e^{[-, x0]_G}(mu + B) - mu."""
    if x0.order != b.order:
        msg = f"gauge element order {x0.order} does not match deformation order {b.order}"
        raise TruncationError(msg)
    star = star_of(b)
    moved = _exp_ad(star, x0.generator)
    logger.debug("applied gauge action at order %d", b.order)
    return HbarSeries([moved[0] - star[0], *moved.coeffs[1:]])


def bch(x: GaugeElement, y: GaugeElement) -> GaugeElement:
    """log(e^x e^y) through the third nested bracket."""
    xy = x.bracket(y)
    return (
        x
        + y
        + xy.scale(Fraction(1, 2))
        + x.bracket(xy).scale(Fraction(1, 12))
        + y.bracket(xy).scale(Fraction(-1, 12))
    )


def exp_operator(x: GaugeElement) -> HbarSeries:
    """e^X = sum_k X^k/k! as a series of arity-1 operators under composition."""
    identity = HbarSeries.constant(MultiDiffOp.identity(x.dimension), x.order)
    total = identity
    power = identity
    for k in range(1, x.order + 1):
        power = series_insert(x.generator, 0, power)
        total = total + power.scale(Fraction(1, factorial(k)))
    return total
