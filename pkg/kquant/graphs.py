"""Admissible graphs: enumeration, canonical labeling and the operators B_Gamma.

Aerial (first-type) vertices are 0..n-1 and ground (second-type) vertices are encoded
as -1..-m, so -j is the j-th ground point. Each aerial vertex carries an ordered star
of targets; the edge order of the whole graph is star 0, then star 1, and so on.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import permutations, product

import networkx as nx

from kquant.algebra.poly import Poly
from kquant.config import get_settings
from kquant.constants import MAX_CANONICAL_VERTICES
from kquant.dgla.multidiff import Derivs, MultiDiffOp
from kquant.dgla.signs import koszul_sign_sym, permutation_sign
from kquant.exceptions import DimensionMismatchError, InvalidGraphError, UnsupportedGraphError
from kquant.polyvector import PolyVectorField

logger = logging.getLogger(__name__)

Star = tuple[int, ...]
GraphKey = tuple[int, int, tuple[Star, ...]]


@dataclass(frozen=True)
class AdmissibleGraph:
    n: int
    m: int
    stars: tuple[Star, ...]

    def __post_init__(self):
        object.__setattr__(self, "stars", tuple(tuple(star) for star in self.stars))
        if self.n < 0 or self.m < 0:
            msg = f"vertex counts must be non-negative, got n={self.n}, m={self.m}"
            raise InvalidGraphError(msg)
        if len(self.stars) != self.n:
            msg = f"{len(self.stars)} stars given for {self.n} aerial vertices"
            raise InvalidGraphError(msg)
        for source, star in enumerate(self.stars):
            if len(set(star)) != len(star):
                msg = f"vertex {source} has a repeated edge in star {star}"
                raise InvalidGraphError(msg)
            for target in star:
                if target == source:
                    msg = f"vertex {source} has a loop"
                    raise InvalidGraphError(msg)
                if not (0 <= target < self.n or -self.m <= target <= -1):
                    msg = f"target {target} of vertex {source} is not a vertex of G_({self.n},{self.m})"
                    raise InvalidGraphError(msg)

    @classmethod
    def wedge(cls) -> AdmissibleGraph:
        return cls(1, 2, ((-1, -2),))

    @classmethod
    def moyal(cls, n: int) -> AdmissibleGraph:
        """n aerial vertices, each with the ordered star (first ground, second ground)."""
        return cls(n, 2, ((-1, -2),) * n)

    @classmethod
    def hkr(cls, m: int) -> AdmissibleGraph:
        return cls(1, m, (tuple(-j for j in range(1, m + 1)),))

    @classmethod
    def triangle(cls) -> AdmissibleGraph:
        return cls(3, 0, ((1,), (2,), (0,)))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(source, target) for source, star in enumerate(self.stars) for target in star]

    @property
    def edge_count(self) -> int:
        return sum(len(star) for star in self.stars)

    @property
    def out_degrees(self) -> tuple[int, ...]:
        return tuple(len(star) for star in self.stars)

    def expected_edge_count(self) -> int:
        return 2 * self.n + self.m - 2

    def has_top_degree(self) -> bool:
        return self.edge_count == self.expected_edge_count()

    def incoming(self, vertex: int) -> list[int]:
        """Indices (in edge order) of the edges landing on a vertex."""
        return [k for k, (_, target) in enumerate(self.edges) if target == vertex]

    def untouched_ground(self) -> list[int]:
        hit = {t for star in self.stars for t in star if t < 0}
        return [-j for j in range(1, self.m + 1) if -j not in hit]

    def skeleton(self) -> nx.Graph:
        """Undirected graph on all vertices, ground points joined along the real line."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_nodes_from(range(-self.m, 0))
        graph.add_edges_from(self.edges)
        graph.add_edges_from((-j, -j - 1) for j in range(1, self.m))
        return graph

    def is_connected(self) -> bool:
        if self.n + self.m == 0:
            return False
        return nx.is_connected(self.skeleton())

    def relabel(self, perm: Sequence[int]) -> AdmissibleGraph:
        """Move aerial vertex k to position perm[k]."""
        if sorted(perm) != list(range(self.n)):
            msg = f"{tuple(perm)} is not a relabeling of {self.n} aerial vertices"
            raise InvalidGraphError(msg)
        stars: list[Star] = [()] * self.n
        for source, star in enumerate(self.stars):
            stars[perm[source]] = tuple(perm[t] if t >= 0 else t for t in star)
        return AdmissibleGraph(self.n, self.m, tuple(stars))

    def reorder_star(self, vertex: int, order: Sequence[int]) -> AdmissibleGraph:
        stars = list(self.stars)
        stars[vertex] = tuple(self.stars[vertex][k] for k in order)
        return AdmissibleGraph(self.n, self.m, tuple(stars))

    def mirror(self) -> AdmissibleGraph:
        """Reflect the ground points: j -> m + 1 - j."""
        return AdmissibleGraph(
            self.n, self.m, tuple(tuple(t if t >= 0 else -(self.m + 1) - t for t in star) for star in self.stars)
        )

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "stars": [list(star) for star in self.stars]}

    def __str__(self) -> str:
        stars = "; ".join(
            f"{source}->" + ",".join(str(t) if t >= 0 else f"g{-t}" for t in star)
            for source, star in enumerate(self.stars)
        )
        return f"G({self.n},{self.m})[{stars}]"


def _check_counts(n: int, m: int):
    if n < 0 or m < 0 or 2 * n + m - 2 < 0:
        msg = f"G_({n},{m}) is empty: need n, m >= 0 and 2n + m - 2 >= 0"
        raise InvalidGraphError(msg)


def enumerate_graphs(
    n: int, m: int, out_degrees: Sequence[int], *, connected_only: bool | None = None
) -> list[AdmissibleGraph]:
    """All admissible graphs with the prescribed ordered stars."""
    _check_counts(n, m)
    if len(out_degrees) != n:
        msg = f"{len(out_degrees)} out-degrees given for {n} aerial vertices"
        raise InvalidGraphError(msg)
    if any(k < 0 for k in out_degrees):
        msg = f"out-degrees must be non-negative, got {tuple(out_degrees)}"
        raise InvalidGraphError(msg)
    connected_only = get_settings().connected_only if connected_only is None else connected_only
    choices = []
    for source, degree in enumerate(out_degrees):
        candidates = [t for t in range(n) if t != source] + [-j for j in range(1, m + 1)]
        choices.append(list(permutations(candidates, degree)))
    graphs = []
    for stars in product(*choices):
        graph = AdmissibleGraph(n, m, stars)
        if connected_only and not graph.is_connected():
            continue
        graphs.append(graph)
    logger.info("enumerated %d graphs in G_(%d,%d) with out-degrees %s", len(graphs), n, m, tuple(out_degrees))
    return graphs


def _sorted_star(star: Star) -> tuple[int, Star]:
    order = sorted(range(len(star)), key=lambda k: star[k])
    return permutation_sign(order), tuple(star[k] for k in order)


def star_order_form(graph: AdmissibleGraph) -> tuple[AdmissibleGraph, int]:
    """Every star sorted in place, vertices untouched, and the sign of the reordering."""
    sign = 1
    stars = []
    for star in graph.stars:
        star_sign, ordered = _sorted_star(star)
        sign *= star_sign
        stars.append(ordered)
    return AdmissibleGraph(graph.n, graph.m, tuple(stars)), sign


def dedup_star_order(graphs: Sequence[AdmissibleGraph]) -> list[AdmissibleGraph]:
    """One graph per family of graphs that differ only in the order of their stars."""
    seen = {star_order_form(graph)[0]: None for graph in graphs}
    logger.info("%d graphs are %d up to star ordering", len(graphs), len(seen))
    return list(seen)


def canonical_form(graph: AdmissibleGraph) -> tuple[AdmissibleGraph, int]:
    """Minimal relabeling with sorted stars, and the sign s with W(graph) = s * W(canonical)."""
    if graph.n > MAX_CANONICAL_VERTICES:
        msg = f"canonical labeling supports at most {MAX_CANONICAL_VERTICES} aerial vertices"
        raise UnsupportedGraphError(msg)
    best: tuple[tuple[Star, ...], tuple[int, ...]] | None = None
    for perm in permutations(range(graph.n)):
        stars = graph.relabel(perm).stars
        key = tuple(_sorted_star(star)[1] for star in stars)
        if best is None or key < best[0]:
            best = (key, perm)
    key, perm = best if best is not None else ((), ())
    _, sign = star_order_form(graph.relabel(perm))
    # perm moves vertex k to perm[k]; the canonical block order lists old vertices by new position
    inverse = [0] * graph.n
    for old, new in enumerate(perm):
        inverse[new] = old
    sign *= koszul_sign_sym(graph.out_degrees, inverse)
    return AdmissibleGraph(graph.n, graph.m, key), sign


def canonical_key(graph: AdmissibleGraph) -> GraphKey:
    canonical, _ = canonical_form(graph)
    return canonical.n, canonical.m, canonical.stars


def key_text(key: GraphKey) -> str:
    n, m, stars = key
    return f"{n}.{m}:" + "|".join(",".join(str(t) for t in star) for star in stars)


def parse_key(text: str) -> GraphKey:
    head, _, body = text.partition(":")
    n, m = (int(part) for part in head.split("."))
    stars = tuple(tuple(int(t) for t in star.split(",") if t) for star in body.split("|")) if n else ()
    return n, m, stars


def group_by_class(graphs: Sequence[AdmissibleGraph]) -> dict[GraphKey, list[AdmissibleGraph]]:
    classes: dict[GraphKey, list[AdmissibleGraph]] = defaultdict(list)
    for graph in graphs:
        classes[canonical_key(graph)].append(graph)
    logger.info("grouped %d graphs into %d classes", len(graphs), len(classes))
    return dict(sorted(classes.items()))


def _unit(dimension: int, axis: int) -> tuple[int, ...]:
    return tuple(1 if a == axis else 0 for a in range(dimension))


def _sum(dimension: int, axes: Sequence[int]) -> tuple[int, ...]:
    alpha = [0] * dimension
    for axis in axes:
        alpha[axis] += 1
    return tuple(alpha)


def b_gamma(graph: AdmissibleGraph, xs: Sequence[PolyVectorField], dimension: int | None = None) -> MultiDiffOp:
    """The polydifferential operator of arity m attached to the graph and the fields xs.

    The dimension is only needed for graphs without aerial vertices.
    """
    if len(xs) != graph.n:
        msg = f"{len(xs)} polyvector fields given for {graph.n} aerial vertices"
        raise InvalidGraphError(msg)
    dimensions = {x.dimension for x in xs}
    if len(dimensions) > 1:
        msg = f"polyvector fields of mixed dimensions {sorted(dimensions)}"
        raise DimensionMismatchError(msg)
    if dimension is None:
        if not xs:
            msg = "graphs without aerial vertices need an explicit dimension"
            raise InvalidGraphError(msg)
        dimension = xs[0].dimension
    elif dimensions and dimensions != {dimension}:
        msg = f"polyvector fields live in dimension {dimensions.pop()}, not {dimension}"
        raise DimensionMismatchError(msg)
    if any(x.degree != len(star) for x, star in zip(xs, graph.stars)):
        return MultiDiffOp.zero(dimension, graph.m)
    edges = graph.edges
    incoming_aerial = [graph.incoming(k) for k in range(graph.n)]
    incoming_ground = [graph.incoming(-j) for j in range(1, graph.m + 1)]
    offsets = []
    total = 0
    for star in graph.stars:
        offsets.append(total)
        total += len(star)
    terms: dict[Derivs, Poly] = {}
    for choice in product(*(list(x.extended_items()) for x in xs)):
        labels = [0] * len(edges)
        for k, (indices, _) in enumerate(choice):
            labels[offsets[k] : offsets[k] + len(indices)] = indices
        coeff = Poly.one(dimension)
        for k, (_, c) in enumerate(choice):
            coeff = coeff * c.derivative(_sum(dimension, [labels[e] for e in incoming_aerial[k]]))
            if not coeff:
                break
        if not coeff:
            continue
        derivs = tuple(_sum(dimension, [labels[e] for e in incoming]) for incoming in incoming_ground)
        terms[derivs] = terms[derivs] + coeff if derivs in terms else coeff
    return MultiDiffOp(dimension, graph.m, terms)
