import math
from fractions import Fraction

import numpy as np
import pytest

from kquant.config import Settings
from kquant.exceptions import DegenerateConfigurationError, SampleCountError, UnsupportedGraphError
from kquant.graphs import AdmissibleGraph
from kquant.weights import (
    Configuration,
    Gauge,
    _stratified_uniform,
    analytic_weight,
    form_density,
    mc_weight,
    mirror_sign,
    orientation_sign,
    phi,
    phi_gradient,
    vanishing_check,
)

SAMPLES = 200_000


def test_phi_values():
    assert phi(1j, 1) == pytest.approx(-math.pi / 2)
    assert phi(1j, 0) == pytest.approx(math.pi)
    assert phi(1j, 2j) == pytest.approx(0.0)


def test_phi_is_invariant_under_translation_and_scaling():
    p, q = 0.3 + 1.2j, -0.7 + 0.5j
    for scale, shift in ((2.0, 0.0), (0.5, 3.0), (7.0, -1.5)):
        assert phi(scale * p + shift, scale * q + shift) == pytest.approx(phi(p, q))


def test_phi_gradient_matches_finite_differences():
    p, q = 0.3 + 1.2j, -0.7 + 0.5j
    h = 1e-6
    steps = ((h, 0), (1j * h, 0), (0, h), (0, 1j * h))
    for (dp, dq), expected in zip(steps, phi_gradient(p, q)):
        numeric = (phi(p + dp, q + dq) - phi(p - dp, q - dq)) / (2 * h)
        assert numeric == pytest.approx(expected, abs=1e-5)


@pytest.mark.parametrize("p, q", [(1j, 1j), (-1j, 1), (1j, -0.5j)])
def test_phi_rejects_degenerate_pairs(p, q):
    with pytest.raises(DegenerateConfigurationError):
        phi(p, q)


def test_configuration_checks():
    with pytest.raises(DegenerateConfigurationError):
        Configuration((1j, 1j), (0.0, 1.0))
    with pytest.raises(DegenerateConfigurationError):
        Configuration((1.0,), (0.0, 1.0))
    with pytest.raises(DegenerateConfigurationError):
        Configuration((1j,), (1.0, 0.0))
    with pytest.raises(DegenerateConfigurationError):
        Configuration((0.5 + 2j,), (0.0,), Gauge.ANCHORED)


def test_orientation_signs():
    assert orientation_sign(Gauge.UNIT, 1) == 1
    assert orientation_sign(Gauge.SHIFTED, 1) == 1
    assert orientation_sign(Gauge.ANCHORED, 1) == -1


def test_wedge_density_at_i():
    assert form_density(AdmissibleGraph.wedge(), Configuration((1j,), (0.0, 1.0))) == pytest.approx(2.0)


def test_lower_degree_graph_has_zero_density():
    graph = AdmissibleGraph(1, 2, ((-1,),))
    assert form_density(graph, Configuration((1j,), (0.0, 1.0))) == 0.0


@pytest.mark.parametrize(
    "graph, expected",
    [
        (AdmissibleGraph.wedge(), Fraction(1, 2)),
        (AdmissibleGraph.wedge().mirror(), Fraction(-1, 2)),
        (AdmissibleGraph.moyal(2), Fraction(1, 4)),
        (AdmissibleGraph.hkr(2), Fraction(1, 2)),
        (AdmissibleGraph.hkr(3), Fraction(1, 6)),
        (AdmissibleGraph(1, 3, ((-2, -1, -3),)), Fraction(-1, 6)),
        (AdmissibleGraph.triangle(), Fraction(0)),
        (AdmissibleGraph(2, 2, ((1, -1), (0, -1))), Fraction(0)),
        (AdmissibleGraph(2, 2, ((1, -1), (-1, -2))), None),
    ],
)
def test_analytic_weights(graph, expected):
    assert analytic_weight(graph) == expected


def test_mirror_sign():
    assert mirror_sign(AdmissibleGraph.wedge()) == -1
    assert mirror_sign(AdmissibleGraph.moyal(2)) == 1


def test_non_top_degree_weight_is_exactly_zero(settings):
    estimate = mc_weight(AdmissibleGraph.triangle(), 10, settings=settings)
    assert estimate.mean == 0.0
    assert estimate.analytic == 0


def test_three_ground_points_are_unsupported(settings):
    with pytest.raises(UnsupportedGraphError):
        mc_weight(AdmissibleGraph.hkr(3), 100, settings=settings)


def test_too_few_samples(settings):
    with pytest.raises(SampleCountError, match="at least 2 samples"):
        mc_weight(AdmissibleGraph.wedge(), 1, settings=settings)
    with pytest.raises(SampleCountError):
        mc_weight(AdmissibleGraph.triangle(), 1, settings=settings)
    with pytest.raises(SampleCountError):
        vanishing_check(AdmissibleGraph.triangle(), 1, settings=settings)


def test_stratified_uniform_has_one_draw_per_stratum():
    rng = np.random.default_rng(3)
    u = _stratified_uniform(rng, 1000)
    assert sorted(np.floor(u * 1000).astype(int)) == list(range(1000))


def test_vanishing_check_rejects_ground_points(settings):
    with pytest.raises(UnsupportedGraphError):
        vanishing_check(AdmissibleGraph.wedge(), 100, settings=settings)
    with pytest.raises(UnsupportedGraphError):
        vanishing_check(AdmissibleGraph(4, 0, ((1,), (2,), (3,), ())), 100, settings=settings)


@pytest.mark.slow
@pytest.mark.parametrize(
    "graph, expected",
    [
        (AdmissibleGraph.wedge(), 0.5),
        (AdmissibleGraph.wedge().mirror(), -0.5),
        (AdmissibleGraph.moyal(2), 0.25),
    ],
)
def test_monte_carlo_matches_closed_form(graph, expected, settings):
    estimate = mc_weight(graph, SAMPLES, 7, settings=settings)
    assert estimate.within(expected)
    assert estimate.std_error < 0.05


@pytest.mark.slow
def test_monte_carlo_is_reproducible(settings):
    first = mc_weight(AdmissibleGraph.wedge(), 50_000, 11, settings=settings)
    again = mc_weight(AdmissibleGraph.wedge(), 50_000, 11, settings=settings)
    single = mc_weight(AdmissibleGraph.wedge(), 50_000, 11, settings=Settings(threads=1, chunk_size=4096))
    assert first == again
    assert single.mean == first.mean
    assert single.std_error == first.std_error


@pytest.mark.slow
def test_anchored_gauge_matches_hkr_weight(settings):
    estimate = mc_weight(AdmissibleGraph.hkr(1), SAMPLES, 3, gauge=Gauge.ANCHORED, settings=settings)
    assert estimate.within(1.0)


@pytest.mark.slow
def test_single_edge_circle_integral(settings):
    estimate = vanishing_check(AdmissibleGraph(2, 0, ((1,), ())), SAMPLES, 5, settings=settings)
    assert estimate.within(2 * math.pi)


@pytest.mark.slow
def test_triangle_integral_vanishes(settings):
    estimate = vanishing_check(AdmissibleGraph.triangle(), 1_000_000, 5, settings=settings)
    assert 0 < estimate.std_error < 0.05
    assert abs(estimate.mean) < 3 * estimate.std_error


@pytest.mark.slow
def test_stratified_directions_beat_independent_ones(settings):
    stratified = vanishing_check(AdmissibleGraph.triangle(), 400_000, 8, settings=settings)
    independent = vanishing_check(AdmissibleGraph.triangle(), 400_000, 8, stratified=False, settings=settings)
    assert independent.within(0.0)
    assert stratified.std_error < independent.std_error
