"""Configuration-space weights of admissible graphs.

The Monte-Carlo estimator integrates the top form of a graph over a gauge slice of the
configuration space: ground points and, for one ground point, the height of the first
aerial point are frozen. Sample blocks of ``Settings.chunk_size`` draw from their own
Philox stream (``jumped(block_index)``) and are merged in block order, so estimates do not
depend on the number of worker threads.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from kquant.config import Settings, get_settings
from kquant.constants import DEFAULT_SAMPLES, DEFAULT_SEED
from kquant.dgla.signs import permutation_sign
from kquant.exceptions import DegenerateConfigurationError, SampleCountError, UnsupportedGraphError
from kquant.graphs import AdmissibleGraph, canonical_key, key_text
from kquant.models import WeightEstimate

logger = logging.getLogger(__name__)

# keeps uniform draws off 0 so tan and v/(1-v) stay finite
_EPS = 2.0**-54
# stratified estimates take their error from the spread of at least this many batch means
MIN_BATCHES = 64

Sampler = Callable[[np.random.Generator, int], np.ndarray]


def phi(p: complex, q: complex) -> float:
    """Hyperbolic angle arg((q - p)/(q - conj p)) in (-pi, pi]."""
    p, q = complex(p), complex(q)
    _check_pair(p, q)
    return float(_phi_array(np.asarray(p), np.asarray(q)))


def phi_gradient(p: complex, q: complex) -> tuple[float, float, float, float]:
    """Partials of phi with respect to (Re p, Im p, Re q, Im q)."""
    p, q = complex(p), complex(q)
    _check_pair(p, q)
    return tuple(float(g) for g in _phi_gradient_array(np.asarray(p), np.asarray(q)))


def _check_pair(p: complex, q: complex):
    if p.imag < 0 or q.imag < 0:
        msg = f"points must lie in the closed upper half-plane, got {p} and {q}"
        raise DegenerateConfigurationError(msg)
    if p == q:
        msg = f"coincident points {p}"
        raise DegenerateConfigurationError(msg)


def _phi_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    angle = np.angle((q - p) * np.conj(q - np.conj(p)))
    return np.where(angle <= -np.pi, np.pi, angle)


def _phi_gradient_array(p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, ...]:
    a = q - p
    b = q - np.conj(p)
    return (
        np.imag(-1 / a + 1 / b),
        np.imag(-1j / a - 1j / b),
        np.imag(1 / a - 1 / b),
        np.imag(1j / a - 1j / b),
    )


class Gauge(Enum):
    """Slices of the configuration space: (ground points, first aerial point anchored at height 1)."""

    UNIT = ((0.0, 1.0), False)
    SHIFTED = ((-1.0, 0.0), False)
    ANCHORED = ((0.0,), True)

    def __init__(self, ground: tuple[float, ...], anchored: bool):
        self.ground = ground
        self.anchored = anchored

    @property
    def m(self) -> int:
        return len(self.ground)

    @classmethod
    def default_for(cls, m: int) -> Gauge:
        if m == 2:
            return cls.UNIT
        if m == 1:
            return cls.ANCHORED
        msg = f"weights are only supported for 1 or 2 ground points, got m={m}"
        raise UnsupportedGraphError(msg)

    def free_columns(self, n: int) -> list[int]:
        """Unfrozen coordinates among (Re p_1, Im p_1, ..., Re p_n, Im p_n, q_1, ..., q_m)."""
        return [c for c in range(2 * n) if not (self.anchored and c == 1)]


@lru_cache
def orientation_sign(gauge: Gauge, n: int) -> int:
    """Sign making (free coordinates, translation, dilation) a positive frame of the full space."""
    width = 2 * n + gauge.m
    point = np.zeros(width)
    for k in range(n):
        point[2 * k] = k
        point[2 * k + 1] = 1.0
    point[2 * n :] = gauge.ground
    translation = np.zeros(width)
    translation[0 : 2 * n : 2] = 1.0
    translation[2 * n :] = 1.0
    rows = [np.eye(width)[c] for c in gauge.free_columns(n)]
    frame = np.vstack([*rows, translation, point])
    return int(np.sign(np.linalg.det(frame)))


@dataclass(frozen=True)
class Configuration:
    points: tuple[complex, ...]
    ground: tuple[float, ...]
    gauge: Gauge | None = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(complex(p) for p in self.points))
        object.__setattr__(self, "ground", tuple(float(q) for q in self.ground))
        if any(p.imag <= 0 for p in self.points):
            msg = "aerial points must have positive imaginary part"
            raise DegenerateConfigurationError(msg)
        if len(set(self.points)) != len(self.points):
            msg = "aerial points must be distinct"
            raise DegenerateConfigurationError(msg)
        if any(a >= b for a, b in zip(self.ground, self.ground[1:])):
            msg = f"ground points must be strictly increasing, got {self.ground}"
            raise DegenerateConfigurationError(msg)
        if self.gauge is not None:
            if self.ground != self.gauge.ground:
                msg = f"ground points {self.ground} do not match gauge {self.gauge.name}"
                raise DegenerateConfigurationError(msg)
            if self.gauge.anchored and (not self.points or self.points[0].imag != 1.0):
                msg = f"gauge {self.gauge.name} needs the first aerial point at height 1"
                raise DegenerateConfigurationError(msg)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        return len(self.ground)


def _gradient_matrix(graph: AdmissibleGraph, points: np.ndarray, ground: Sequence[float]) -> np.ndarray:
    """Partials of the edge angles (rows, in edge order) along all 2n + m coordinates."""
    size = points.shape[0]
    n = graph.n
    rows = np.zeros((size, graph.edge_count, 2 * n + graph.m))
    for e, (source, target) in enumerate(graph.edges):
        p = points[:, source]
        q = points[:, target] if target >= 0 else np.full(size, complex(ground[-target - 1]))
        d_re_p, d_im_p, d_re_q, d_im_q = _phi_gradient_array(p, q)
        rows[:, e, 2 * source] += d_re_p
        rows[:, e, 2 * source + 1] += d_im_p
        if target >= 0:
            rows[:, e, 2 * target] += d_re_q
            rows[:, e, 2 * target + 1] += d_im_q
        else:
            rows[:, e, 2 * n - target - 1] += d_re_q
    return rows


def _density(
    graph: AdmissibleGraph, gauge: Gauge, points: np.ndarray, ground: Sequence[float] | None = None
) -> np.ndarray:
    ground = gauge.ground if ground is None else ground
    matrix = _gradient_matrix(graph, points, ground)[:, :, gauge.free_columns(graph.n)]
    return orientation_sign(gauge, graph.n) * np.linalg.det(matrix)


def form_density(graph: AdmissibleGraph, config: Configuration) -> float:
    """The weight form of a top-degree graph as a density in the free coordinates of the gauge."""
    gauge = config.gauge or Gauge.default_for(config.m)
    if config.m != graph.m or config.n != graph.n:
        msg = f"configuration with n={config.n}, m={config.m} does not fit graph {graph}"
        raise DegenerateConfigurationError(msg)
    if not graph.has_top_degree():
        return 0.0
    points = np.asarray([config.points], dtype=complex)
    return float(_density(graph, gauge, points, config.ground)[0])


def _half_plane_sampler(graph: AdmissibleGraph, gauge: Gauge) -> Sampler:
    n = graph.n

    def sample(rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random((size, n)) + _EPS
        v = rng.random((size, n)) + _EPS
        x = np.tan(np.pi * (u - 0.5))
        y = v / (1.0 - v)
        jacobian = np.pi * (1.0 + x**2)
        if gauge.anchored:
            y[:, 0] = 1.0
            jacobian = jacobian * np.concatenate([np.ones((size, 1)), (1.0 - v[:, 1:]) ** -2], axis=1)
        else:
            jacobian = jacobian * (1.0 - v) ** -2
        return _density(graph, gauge, x + 1j * y) * np.prod(jacobian, axis=1)

    return sample


def _check_samples(samples: int):
    if samples < 2:
        msg = f"need at least 2 samples for a standard error, got {samples}"
        raise SampleCountError(msg)


def _chunk_plan(samples: int, chunk_size: int) -> list[tuple[int, int]]:
    return [(index, min(chunk_size, samples - start)) for index, start in enumerate(range(0, samples, chunk_size))]


def _merge(stats: Sequence[tuple[int, float, float]]) -> tuple[int, float, float]:
    count, mean, m2 = 0, 0.0, 0.0
    for n_b, mean_b, m2_b in stats:
        total = count + n_b
        delta = mean_b - mean
        mean += delta * n_b / total
        m2 += m2_b + delta * delta * count * n_b / total
        count = total
    return count, mean, m2


def _integrate(
    sampler: Sampler, samples: int, seed: int, settings: Settings, *, batched: bool = False
) -> tuple[float, float]:
    """Mean and standard error of the sampler's values over ``samples`` draws.

    With ``batched`` the draws inside one chunk may be dependent (stratified), chunks are
    independent, and the error comes from the spread of the chunk means.
    """
    _check_samples(samples)
    chunk_size = settings.chunk_size
    if batched:
        chunk_size = min(chunk_size, max(1, samples // MIN_BATCHES))
    plan = _chunk_plan(samples, chunk_size)
    logger.debug("sampling %d values in %d chunks on %d threads", samples, len(plan), settings.threads)

    def run(chunk: tuple[int, int]) -> tuple[int, float, float]:
        index, size = chunk
        rng = np.random.Generator(np.random.Philox(seed).jumped(index))
        values = sampler(rng, size)
        mean = float(values.mean())
        return size, mean, float(((values - mean) ** 2).sum())

    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        stats = list(pool.map(run, plan))
    count, mean, m2 = _merge(stats)
    if batched:
        spread = sum(size * (mean_b - mean) ** 2 for size, mean_b, _ in stats) / (len(stats) - 1)
        return mean, math.sqrt(spread / count)
    return mean, math.sqrt(m2 / (count - 1)) / math.sqrt(count)


def mc_weight(
    graph: AdmissibleGraph,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    *,
    gauge: Gauge | None = None,
    settings: Settings | None = None,
) -> WeightEstimate:
    settings = settings or get_settings()
    _check_samples(samples)
    key = key_text(canonical_key(graph))
    exact = analytic_weight(graph)
    if not graph.has_top_degree():
        return WeightEstimate(0.0, 0.0, samples, seed, key, Fraction(0))
    gauge = gauge or Gauge.default_for(graph.m)
    if gauge.m != graph.m:
        msg = f"gauge {gauge.name} fixes {gauge.m} ground points, graph has {graph.m}"
        raise UnsupportedGraphError(msg)
    if graph.n == 0:
        return WeightEstimate(1.0, 0.0, samples, seed, key, exact)
    mean, std_error = _integrate(_half_plane_sampler(graph, gauge), samples, seed, settings)
    scale = (2 * math.pi) ** -graph.edge_count
    logger.info("weight of %s: %.6f +- %.6f (%d samples, seed %d)", key, mean * scale, std_error * scale, samples, seed)
    return WeightEstimate(mean * scale, std_error * scale, samples, seed, key, exact)


def _star_sign(star: Sequence[int], reference: Sequence[int]) -> int | None:
    reference = list(reference)
    if sorted(star) != sorted(reference):
        return None
    return permutation_sign([reference.index(t) for t in star])


def analytic_weight(graph: AdmissibleGraph) -> Fraction | None:
    """Exact weights of the families with a closed form, None for the rest."""
    if not graph.has_top_degree() or graph.untouched_ground():
        return Fraction(0)
    if graph.n == 0:
        return Fraction(1)
    if graph.m == 2:
        signs = [_star_sign(star, (-1, -2)) for star in graph.stars]
        if all(s is not None for s in signs):
            return Fraction(math.prod(signs), 2**graph.n)
    if graph.n == 1:
        sign = _star_sign(graph.stars[0], range(-1, -graph.m - 1, -1))
        if sign is not None:
            return Fraction(sign, math.factorial(graph.m))
    return None


def mirror_sign(graph: AdmissibleGraph) -> int:
    """W(graph.mirror()) = mirror_sign(graph) * W(graph)."""
    return (-1) ** (graph.edge_count + graph.n)


def _radial_density(r: np.ndarray) -> np.ndarray:
    return 1.0 / ((1.0 + r) ** 2 * 2 * np.pi * r)


def _circle_density(graph: AdmissibleGraph, t: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Form density of a graph without ground points in the coordinates (t, Re p_3, Im p_3)."""
    size = points.shape[0]
    width = 2 * graph.n - 3
    rows = np.zeros((size, graph.edge_count, width))
    for e, (source, target) in enumerate(graph.edges):
        a = points[:, target] - points[:, source]
        for vertex, gx, gy in (
            (source, np.imag(-1 / a), np.imag(-1j / a)),
            (target, np.imag(1 / a), np.imag(1j / a)),
        ):
            if vertex == 1:
                rows[:, e, 0] += -np.sin(t) * gx + np.cos(t) * gy
            elif vertex == 2:
                rows[:, e, 1] += gx
                rows[:, e, 2] += gy
    return np.linalg.det(rows)


def _stratified_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    """One uniform draw from each of ``size`` equal strata of [0, 1), in random order."""
    return (rng.permutation(size) + rng.random(size)) / size


def _circle_sampler(graph: AdmissibleGraph, stratified: bool) -> Sampler:
    def sample(rng: np.random.Generator, size: int) -> np.ndarray:
        t = 2 * np.pi * rng.random(size)
        turn = np.exp(1j * t)
        columns = [np.zeros(size, dtype=complex), turn]
        weight = np.full(size, 2 * np.pi)
        if graph.n == 3:
            v = rng.random(size) + _EPS
            theta = 2 * np.pi * (_stratified_uniform(rng, size) if stratified else rng.random(size))
            # p_3 is drawn around p_1 or p_2 in the frame where p_2 = 1, then turned with p_2
            centre = np.where(rng.random(size) < 0.5, 0.0, 1.0)
            third = (centre + v / (1.0 - v) * np.exp(1j * theta)) * turn
            density = 0.5 * (_radial_density(np.abs(third)) + _radial_density(np.abs(third - turn)))
            columns.append(third)
            weight = weight / density
        return _circle_density(graph, t, np.stack(columns, axis=1)) * weight

    return sample


def vanishing_check(
    graph: AdmissibleGraph,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    *,
    stratified: bool = True,
    settings: Settings | None = None,
) -> WeightEstimate:
    """Unnormalized integral of the form of a graph without ground points over C_n.

    The slice puts p_1 at the origin and p_2 on the unit circle. With ``stratified`` the
    direction of p_3 seen from its centre is drawn one per stratum of the circle within each
    batch, and the error is taken over batches.
    """
    settings = settings or get_settings()
    if graph.m != 0:
        msg = f"vanishing check integrates over C_n, graph has {graph.m} ground points"
        raise UnsupportedGraphError(msg)
    if graph.n not in (2, 3):
        msg = f"vanishing check supports n = 2 or 3, got {graph.n}"
        raise UnsupportedGraphError(msg)
    _check_samples(samples)
    key = key_text(canonical_key(graph))
    if graph.edge_count != 2 * graph.n - 3:
        return WeightEstimate(0.0, 0.0, samples, seed, key, Fraction(0))
    mean, std_error = _integrate(_circle_sampler(graph, stratified), samples, seed, settings, batched=stratified)
    logger.info("integral of %s over C_%d: %.6f +- %.6f", key, graph.n, mean, std_error)
    return WeightEstimate(mean, std_error, samples, seed, key)
