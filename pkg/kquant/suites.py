"""Property suites run by ``kquant verify --suite``.

Each suite returns a SuiteResult of named checks; random operands come from a
``random.Random`` seeded with the run seed, so a failing case can be replayed.
"""

from __future__ import annotations

import logging
import math
import random
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from fractions import Fraction

from kquant.algebra.poly import Poly, monomials_up_to
from kquant.algebra.scalar import Scalar
from kquant.config import Settings, get_settings
from kquant.constants import DEFAULT_SAMPLES, DEFAULT_SEED, HBAR
from kquant.dgla.gauge import gauge_act
from kquant.dgla.hochschild import (
    associator,
    gerstenhaber_bracket,
    hochschild_delta,
    mc_residual,
    modified_d,
    star_of,
)
from kquant.dgla.multidiff import mu
from kquant.generators import random_deformation, random_gauge, random_operator, random_polyvector
from kquant.graphs import AdmissibleGraph
from kquant.models import CheckResult, SuiteResult
from kquant.polyvector import (
    PolyVectorField,
    diamond,
    hkr,
    lie_bracket,
    poisson_bracket,
    schouten_by_definition,
    schouten_nijenhuis,
    wedge,
)
from kquant.star import (
    StarProduct,
    WeightSource,
    assemble,
    first_order_bracket,
    formality_residual,
    gauge_transform,
    verify_associativity,
)
from kquant.weights import analytic_weight, mc_weight, vanishing_check
from kquant.weyl import commutator, groenewold_poisson_side, groenewold_residual, weyl_quantize

logger = logging.getLogger(__name__)

DGLA_CASES = 500
MAURER_CARTAN_CASES = 100
CHAIN_MAP_CASES = 200
GAUGE_CASES = 20
VANISHING_SAMPLES = 1_000_000
VANISHING_MAX_ERROR = 0.05


@dataclass(frozen=True)
class SuiteOptions:
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES
    settings: Settings | None = None

    @property
    def rng(self) -> random.Random:
        return random.Random(self.seed)


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def _property(name: str, cases: Iterable[bool]) -> CheckResult:
    total = failures = 0
    for ok in cases:
        total += 1
        if not ok:
            failures += 1
            logger.debug("%s: case %d failed", name, total)
    return CheckResult(name, failures == 0, total, f"{failures} of {total} cases failed" if failures else "")


def groenewold_suite(options: SuiteOptions) -> SuiteResult:
    residual = groenewold_residual((3, 3))
    words = list(residual.items())
    coefficient = residual.coefficient((0,), (0,))
    operator_side = len(words) == 1 and coefficient == (Scalar(0), Scalar(0), Scalar(-3))
    detail = f"\N{MINUS SIGN}3{HBAR}² (i²-resolved)" if operator_side else residual.to_text()
    result = SuiteResult("groenewold", [CheckResult("operator side", operator_side, 1, detail)])
    poisson_side = groenewold_poisson_side((3, 3))
    result.checks.append(CheckResult("poisson side", not poisson_side, 1, poisson_side.to_text()))

    def dirac_cases():
        for f in monomials_up_to(2, 2):
            for g in monomials_up_to(2, 5):
                quantum = commutator(weyl_quantize(f), weyl_quantize(g)).divide_by_ihbar()
                yield quantum == weyl_quantize(poisson_bracket(f, g), quantum.order)

    result.checks.append(_property("dirac rule up to quadratic symbols", dirac_cases()))
    return result


def dgla_suite(options: SuiteOptions) -> SuiteResult:
    rng = options.rng

    def dimension() -> int:
        return rng.randint(1, 3)

    def delta_squared():
        for _ in range(DGLA_CASES):
            f = random_operator(rng, dimension(), rng.randint(0, 3))
            yield not hochschild_delta(hochschild_delta(f))

    def d_is_bracket_with_mu():
        for _ in range(DGLA_CASES):
            d = dimension()
            f = random_operator(rng, d, rng.randint(0, 3))
            yield modified_d(f) == gerstenhaber_bracket(mu(d), f)

    def gerstenhaber_triples():
        for _ in range(DGLA_CASES):
            d = dimension()
            yield [random_operator(rng, d, rng.randint(1, 3), terms=1) for _ in range(3)]

    def gerstenhaber_jacobi():
        for f, g, h in gerstenhaber_triples():
            p, q, r = f.degree, g.degree, h.degree
            total = (
                gerstenhaber_bracket(f, gerstenhaber_bracket(g, h)) * _sign(p * r)
                + gerstenhaber_bracket(g, gerstenhaber_bracket(h, f)) * _sign(q * p)
                + gerstenhaber_bracket(h, gerstenhaber_bracket(f, g)) * _sign(r * q)
            )
            yield not total

    def gerstenhaber_leibniz():
        for f, g, _ in gerstenhaber_triples():
            lhs = modified_d(gerstenhaber_bracket(f, g))
            rhs = gerstenhaber_bracket(modified_d(f), g) + gerstenhaber_bracket(f, modified_d(g)) * _sign(f.degree)
            yield lhs == rhs

    def gerstenhaber_skew():
        for f, g, _ in gerstenhaber_triples():
            yield gerstenhaber_bracket(f, g) == -gerstenhaber_bracket(g, f) * _sign(f.degree * g.degree)

    def polyvector_triples():
        for _ in range(DGLA_CASES):
            d = dimension()
            yield [random_polyvector(rng, d, rng.randint(1, min(d, 3))) for _ in range(3)]

    def schouten_jacobi():
        for x, y, z in polyvector_triples():
            a, b, c = x.degree - 1, y.degree - 1, z.degree - 1
            total = (
                schouten_nijenhuis(x, schouten_nijenhuis(y, z)) * _sign(a * c)
                + schouten_nijenhuis(y, schouten_nijenhuis(z, x)) * _sign(b * a)
                + schouten_nijenhuis(z, schouten_nijenhuis(x, y)) * _sign(c * b)
            )
            yield not total

    def schouten_skew():
        for x, y, _ in polyvector_triples():
            sign = _sign((x.degree - 1) * (y.degree - 1))
            yield schouten_nijenhuis(x, y) == -schouten_nijenhuis(y, x) * sign

    def schouten_leibniz():
        for x, y, z in polyvector_triples():
            lhs = schouten_nijenhuis(x, wedge(y, z))
            rhs = wedge(schouten_nijenhuis(x, y), z) + wedge(y, schouten_nijenhuis(x, z)) * _sign(
                (x.degree - 1) * y.degree
            )
            yield lhs == rhs

    def schouten_by_diamond():
        for _ in range(DGLA_CASES):
            d = dimension()
            xs = [random_polyvector(rng, d, 1, max_degree=2) for _ in range(rng.randint(1, 2))]
            ys = [random_polyvector(rng, d, 1, max_degree=2) for _ in range(rng.randint(1, 2))]
            x, y = xs[0], ys[0]
            for v in xs[1:]:
                x = wedge(x, v)
            for v in ys[1:]:
                y = wedge(y, v)
            yield schouten_nijenhuis(x, y) == schouten_by_definition(xs, ys)

    def lie_by_diamond():
        for _ in range(DGLA_CASES):
            d = dimension()
            x, y = (random_polyvector(rng, d, 1, max_degree=1) for _ in range(2))
            yield diamond(x, y) - diamond(y, x) == lie_bracket(x, y)

    return SuiteResult(
        "dgla",
        [
            _property("delta squared", delta_squared()),
            _property("d_H is [mu, -]_G", d_is_bracket_with_mu()),
            _property("gerstenhaber skew symmetry", gerstenhaber_skew()),
            _property("gerstenhaber jacobi", gerstenhaber_jacobi()),
            _property("d_H derivation of [-, -]_G", gerstenhaber_leibniz()),
            _property("schouten skew symmetry", schouten_skew()),
            _property("schouten jacobi", schouten_jacobi()),
            _property("schouten leibniz", schouten_leibniz()),
            _property("schouten via diamond", schouten_by_diamond()),
            _property("lie bracket via diamond", lie_by_diamond()),
        ],
    )


def maurer_cartan_suite(options: SuiteOptions) -> SuiteResult:
    rng = options.rng

    def residual_is_associator():
        for _ in range(MAURER_CARTAN_CASES):
            b = random_deformation(rng, rng.randint(1, 3), 2)
            yield mc_residual(b) == associator(star_of(b))

    moyal = StarProduct.moyal(PolyVectorField.standard_symplectic(1), 2).deformation()

    def gauge_keeps_solutions():
        for _ in range(GAUGE_CASES):
            moved = gauge_act(random_gauge(rng, 2, 2), moyal)
            yield not any(mc_residual(moved))

    return SuiteResult(
        "maurer-cartan",
        [
            _property("residual equals associator", residual_is_associator()),
            _property("gauge orbits of solutions", gauge_keeps_solutions()),
        ],
    )


def chain_map_suite(options: SuiteOptions) -> SuiteResult:
    rng = options.rng

    def closed():
        for _ in range(CHAIN_MAP_CASES):
            d = rng.randint(1, 3)
            yield not modified_d(hkr(random_polyvector(rng, d, rng.randint(0, d))))

    return SuiteResult("chain-map", [_property("d_H of hkr", closed())])


def bracket_suite(options: SuiteOptions) -> SuiteResult:
    rng = options.rng
    pi = PolyVectorField.so3()
    s = assemble(pi, 1, settings=options.settings)
    bracket = first_order_bracket(s)
    result = SuiteResult("bracket", [CheckResult("first-order bracket", bracket == pi, 1, bracket.to_text())])

    def gauge_invariant():
        for _ in range(GAUGE_CASES):
            moved = gauge_transform(s, random_gauge(rng, 3, 1))
            yield first_order_bracket(moved) == pi

    result.checks.append(_property("gauge invariance", gauge_invariant()))
    return result


def moyal_suite(options: SuiteOptions) -> SuiteResult:
    result = SuiteResult("moyal")
    for pairs in (1, 2):
        pi = PolyVectorField.standard_symplectic(pairs)
        s = assemble(pi, 3, settings=options.settings)
        same = s.terms == StarProduct.moyal(pi, 3).terms
        result.checks.append(CheckResult(f"coincidence on R^{2 * pairs}", same, 1))
    report = verify_associativity(assemble(PolyVectorField.standard_symplectic(1), 3), settings=options.settings)
    result.checks.append(
        CheckResult("associativity on R^2", report.associative, report.triples_checked, f"{report.max_violation:g}")
    )
    return result


def weights_suite(options: SuiteOptions) -> SuiteResult:
    result = SuiteResult("weights")
    for m, expected in ((2, Fraction(1, 2)), (3, Fraction(1, 6))):
        value = analytic_weight(AdmissibleGraph.hkr(m))
        result.checks.append(CheckResult(f"hkr weight m={m}", value == expected, 1, str(value)))
    wedge_graph = AdmissibleGraph.wedge()
    for name, graph, expected in (("wedge", wedge_graph, 0.5), ("mirrored wedge", wedge_graph.mirror(), -0.5)):
        estimate = mc_weight(graph, options.samples, options.seed, settings=options.settings)
        detail = f"{estimate.mean:.6f} +- {estimate.std_error:.6f}"
        result.checks.append(CheckResult(f"{name} monte carlo", estimate.within(expected), estimate.samples, detail))
    return result


def vanishing_suite(options: SuiteOptions) -> SuiteResult:
    result = SuiteResult("vanishing")
    samples = max(options.samples, VANISHING_SAMPLES)
    triangle = vanishing_check(AdmissibleGraph.triangle(), samples, options.seed, settings=options.settings)
    ok = triangle.within(0.0) and 0 < triangle.std_error < VANISHING_MAX_ERROR
    detail = f"{triangle.mean:.6f} +- {triangle.std_error:.6f}"
    result.checks.append(CheckResult("triangle", ok, triangle.samples, detail))
    edge = vanishing_check(AdmissibleGraph(2, 0, ((1,), ())), options.samples, options.seed, settings=options.settings)
    detail = f"{edge.mean:.6f} +- {edge.std_error:.6f}"
    result.checks.append(CheckResult("single edge", edge.within(2 * math.pi), edge.samples, detail))
    return result


def formality_suite(options: SuiteOptions) -> SuiteResult:
    rng = options.rng
    result = SuiteResult("formality")
    fs = monomials_up_to(3, 2)
    for degree in range(4):
        x = random_polyvector(rng, 3, degree, max_degree=1)
        checked = formality_residual([x], monomials_up_to(3, 1), settings=options.settings)
        result.checks.append(CheckResult(f"n=1 degree {degree}", checked.ok and checked.exact, checked.cases))
    source = WeightSource("monte_carlo", options.samples, options.seed, settings=options.settings)
    linear = PolyVectorField.basis(3, (1, 2), Poly.variable(3, 1))
    constant = PolyVectorField.basis(3, (1, 3))
    for name, xs in (("linear and constant", [linear, constant]), ("so(3)", [PolyVectorField.so3()] * 2)):
        checked = formality_residual(xs, fs, source, settings=options.settings)
        detail = f"{checked.residual:g} <= 3 * {checked.sigma:g}"
        result.checks.append(CheckResult(f"n=2 {name}", checked.ok, checked.cases, detail))
    return result


SUITES: dict[str, Callable[[SuiteOptions], SuiteResult]] = {
    "groenewold": groenewold_suite,
    "dgla": dgla_suite,
    "maurer-cartan": maurer_cartan_suite,
    "chain-map": chain_map_suite,
    "bracket": bracket_suite,
    "moyal": moyal_suite,
    "weights": weights_suite,
    "vanishing": vanishing_suite,
    "formality": formality_suite,
}

# Monte-Carlo suites, left out of "all"
SLOW_SUITES = frozenset({"weights", "vanishing", "formality"})


def run_suites(names: Iterable[str], options: SuiteOptions | None = None) -> list[SuiteResult]:
    options = options or SuiteOptions(settings=get_settings())
    results = []
    for name in names:
        logger.info("running suite %s (seed %d)", name, options.seed)
        results.append(SUITES[name](options))
    return results
