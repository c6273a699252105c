"""Star products assembled from admissible graphs and their weights.

U_n(xs) = sum over G_(n,m) of W * B / prod(#Star(k)!), and the star product of a Poisson
bivector is mu + sum_n hbar^n/n! U_n(pi, ..., pi).
"""

from __future__ import annotations

import logging
import threading
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod

from kquant.algebra.poly import Poly
from kquant.algebra.series import HbarSeries
from kquant.config import Settings, get_settings
from kquant.constants import DEFAULT_SAMPLES, DEFAULT_SEED, MAX_STAR_ORDER
from kquant.dgla.gauge import GaugeElement, gauge_act
from kquant.dgla.hochschild import deformation_of, star_of
from kquant.dgla.multidiff import MultiDiffOp, mu
from kquant.exceptions import (
    ArityMismatchError,
    DegreeError,
    MissingWeightError,
    NotUnitalError,
    TruncationError,
    UnsupportedGraphError,
)
from kquant.graphs import AdmissibleGraph, b_gamma, canonical_form, enumerate_graphs, group_by_class, key_text
from kquant.models import WeightKind, WeightRecord
from kquant.polyvector import PolyVectorField, require_poisson
from kquant.tables import WeightTable
from kquant.weights import analytic_weight, mc_weight
from kquant.weyl import moyal_operator

logger = logging.getLogger(__name__)


@dataclass
class WeightSource:
    """Where graph weights come from: closed forms first, then a table, then Monte Carlo."""

    kind: WeightKind = "analytic"
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    table: WeightTable | None = None
    prefer_analytic: bool = True
    settings: Settings | None = None
    _estimates: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def resolve(self, graph: AdmissibleGraph) -> tuple[Fraction, float, WeightKind]:
        """Weight of the canonical form of the graph class, its std error and origin."""
        canonical, _ = canonical_form(graph)
        if self.prefer_analytic:
            exact = analytic_weight(canonical)
            if exact is not None:
                return exact, 0.0, "analytic"
        key = key_text((canonical.n, canonical.m, canonical.stars))
        if self.table is not None and key in self.table:
            estimate = self.table[key]
            value = estimate.analytic if estimate.analytic is not None else Fraction(estimate.mean)
            return value, estimate.std_error, "table"
        if self.kind != "monte_carlo":
            msg = f"no {self.kind} weight for graph class {key}"
            raise MissingWeightError(msg)
        with self._lock:
            if key not in self._estimates:
                self._estimates[key] = mc_weight(canonical, self.samples, self.seed, settings=self.settings)
            estimate = self._estimates[key]
        return Fraction(estimate.mean), estimate.std_error, "monte_carlo"


@dataclass(frozen=True)
class Contribution:
    """One graph class: its weight record and the operator the weight multiplies."""

    record: WeightRecord
    operator: MultiDiffOp

    @property
    def term(self) -> MultiDiffOp:
        return self.operator * self.record.weight


def _class_operator(graphs: Sequence[AdmissibleGraph], xs: Sequence[PolyVectorField], uniform: bool) -> MultiDiffOp:
    """sum over the class of sign(g) * B_g(xs) / prod(#Star!), the cofactor of W(canonical)."""
    stars = prod(factorial(k) for k in graphs[0].out_degrees)
    if uniform:
        # W * B is constant on a class when every vertex carries the same even-degree field
        _, sign = canonical_form(graphs[0])
        return b_gamma(graphs[0], xs) * Fraction(sign * len(graphs), stars)
    total = MultiDiffOp.zero(xs[0].dimension, graphs[0].m)
    for graph in graphs:
        _, sign = canonical_form(graph)
        total = total + b_gamma(graph, xs) * sign
    return total * Fraction(1, stars)


def graph_contributions(
    xs: Sequence[PolyVectorField],
    source: WeightSource | None = None,
    *,
    settings: Settings | None = None,
) -> list[Contribution]:
    """Nonzero class contributions to U_n(xs), in canonical key order."""
    if not xs:
        msg = "Taylor coefficients need at least one polyvector field"
        raise ValueError(msg)
    settings = settings or get_settings()
    source = source or WeightSource(settings=settings)
    n = len(xs)
    degrees = [x.degree for x in xs]
    m = sum(degrees) - 2 * n + 2
    if m < 0:
        msg = f"fields of degrees {degrees} have no graphs: arity {m} < 0"
        raise DegreeError(msg)
    graphs = enumerate_graphs(n, m, degrees, connected_only=settings.connected_only)
    classes = group_by_class(graphs)
    uniform = all(x == xs[0] for x in xs) and xs[0].degree % 2 == 0

    def contribute(item) -> Contribution | None:
        key, members = item
        operator = _class_operator(members, xs, uniform)
        if not operator:
            return None
        weight, std_error, kind = source.resolve(members[0])
        return Contribution(WeightRecord(n, key_text(key), len(members), weight, std_error, kind), operator)

    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        results = list(pool.map(contribute, classes.items()))
    contributions = [c for c in results if c is not None]
    logger.info("U_%d with arity %d: %d of %d classes contribute", n, m, len(contributions), len(classes))
    return contributions


def taylor_coefficient(
    xs: Sequence[PolyVectorField],
    source: WeightSource | None = None,
    *,
    settings: Settings | None = None,
) -> MultiDiffOp:
    """U_n(xs) as a polydifferential operator of arity sum(deg) - 2n + 2."""
    contributions = graph_contributions(xs, source, settings=settings)
    m = sum(x.degree for x in xs) - 2 * len(xs) + 2
    total = MultiDiffOp.zero(xs[0].dimension, m)
    for contribution in contributions:
        total = total + contribution.term
    return total


@dataclass(frozen=True)
class StarProduct:
    terms: HbarSeries
    provenance: tuple[WeightRecord, ...] = ()
    contributions: tuple[Contribution, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if any(op.arity != 2 for op in self.terms):
            msg = "star product coefficients must be bidifferential operators"
            raise ArityMismatchError(msg)
        if self.terms[0] != mu(self.terms[0].dimension):
            msg = "the hbar^0 part of a star product must be the pointwise product"
            raise TruncationError(msg)

    @classmethod
    def pointwise(cls, dimension: int, order: int) -> StarProduct:
        return cls(star_of(HbarSeries.constant(MultiDiffOp.zero(dimension, 2), order)))

    @classmethod
    def moyal(cls, pi: PolyVectorField | Sequence[Sequence], order: int) -> StarProduct:
        """The closed-form Moyal product with i absorbed into hbar."""
        return cls(moyal_operator(pi, order, imaginary=False))

    @property
    def order(self) -> int:
        return self.terms.order

    @property
    def dimension(self) -> int:
        return self.terms[0].dimension

    def deformation(self) -> HbarSeries:
        return deformation_of(self.terms)

    def __call__(self, f: Poly, g: Poly) -> HbarSeries:
        return self.terms.map(lambda op: op.apply((f, g)))

    def to_text(self) -> str:
        return "\n".join(f"hbar^{k}: {op.to_text()}" for k, op in enumerate(self.terms) if op)


def assemble(
    pi: PolyVectorField,
    order: int,
    source: WeightSource | None = None,
    *,
    settings: Settings | None = None,
) -> StarProduct:
    if pi.degree != 2:
        msg = f"star products are built from bivectors, got degree {pi.degree}"
        raise DegreeError(msg)
    if order > MAX_STAR_ORDER:
        msg = f"star products are assembled up to order {MAX_STAR_ORDER}, got {order}"
        raise UnsupportedGraphError(msg)
    if order < 0:
        msg = f"order must be non-negative, got {order}"
        raise ValueError(msg)
    require_poisson(pi)
    settings = settings or get_settings()
    source = source or WeightSource(settings=settings)
    coeffs = [mu(pi.dimension)]
    provenance: list[WeightRecord] = []
    contributions: list[Contribution] = []
    for n in range(1, order + 1):
        total = MultiDiffOp.zero(pi.dimension, 2)
        for contribution in graph_contributions([pi] * n, source, settings=settings):
            scaled = Contribution(contribution.record, contribution.operator * Fraction(1, factorial(n)))
            total = total + scaled.term
            provenance.append(scaled.record)
            contributions.append(scaled)
        coeffs.append(total)
    logger.info("assembled star product to order %d from %d graph classes", order, len(provenance))
    return StarProduct(HbarSeries(coeffs), tuple(provenance), tuple(contributions))


def swap_arguments(op: MultiDiffOp) -> MultiDiffOp:
    return MultiDiffOp(op.dimension, 2, [((b, a), c) for (a, b), c in op.items()])


def first_order_bracket(s: StarProduct) -> PolyVectorField:
    """The bivector of B_1(f, g) - B_1(g, f)."""
    if s.order < 1:
        msg = "the first-order bracket needs a star product of order >= 1"
        raise TruncationError(msg)
    skew = s.terms[1] - swap_arguments(s.terms[1])
    coeffs = {}
    for (a, b), c in skew.items():
        if sum(a) == 1 and sum(b) == 1:
            i, j = a.index(1), b.index(1)
            if i < j:
                coeffs[(i, j)] = c
        else:
            msg = f"skew part of B_1 has the term {(a, b)}, so it is not a bivector field"
            raise DegreeError(msg)
    return PolyVectorField(s.dimension, 2, coeffs)


def gauge_transform(s: StarProduct, phi: GaugeElement) -> StarProduct:
    """phi o * o (phi^-1 (x) phi^-1) for phi = exp(X)."""
    if not phi.annihilates_constants():
        msg = "gauge generators must annihilate constants"
        raise NotUnitalError(msg)
    moved = gauge_act(-phi, s.deformation())
    return StarProduct(star_of(moved), s.provenance)
