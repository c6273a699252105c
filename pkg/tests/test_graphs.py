import pytest

from kquant.algebra.poly import coordinates
from kquant.exceptions import InvalidGraphError
from kquant.graphs import (
    AdmissibleGraph,
    b_gamma,
    canonical_form,
    canonical_key,
    dedup_star_order,
    enumerate_graphs,
    group_by_class,
    key_text,
    parse_key,
    star_order_form,
)
from kquant.polyvector import PolyVectorField, bivector_bracket


@pytest.fixture(scope="module")
def g22():
    return enumerate_graphs(2, 2, [2, 2])


def test_first_order_graphs():
    graphs = enumerate_graphs(1, 2, [2])
    assert len(graphs) == 2
    assert len(group_by_class(graphs)) == 1


def test_second_order_counts(g22):
    assert len(g22) == 36
    assert all(g.is_connected() for g in g22)
    assert len(dedup_star_order(g22)) == 9
    assert len(group_by_class(g22)) == 6


def test_empty_family_is_rejected():
    with pytest.raises(InvalidGraphError):
        enumerate_graphs(0, 1, [])


@pytest.mark.parametrize(
    "stars",
    [((0,),), ((-1, -1),), ((-3,),)],
    ids=["loop", "double edge", "missing ground point"],
)
def test_inadmissible_graphs(stars):
    with pytest.raises(InvalidGraphError):
        AdmissibleGraph(1, 2, stars)


def test_wedge_canonical_sign():
    canonical, sign = canonical_form(AdmissibleGraph.wedge())
    assert canonical.stars == ((-2, -1),)
    assert sign == -1
    assert canonical_form(canonical) == (canonical, 1)


def test_canonical_key_ignores_labels(g22):
    for graph in g22:
        swapped = graph.relabel((1, 0))
        assert canonical_key(swapped) == canonical_key(graph)


def test_reordering_a_star_flips_the_sign(g22):
    for graph in g22:
        flipped = graph.reorder_star(0, (1, 0))
        assert canonical_form(flipped)[1] == -canonical_form(graph)[1]


def test_star_order_form_keeps_vertex_labels():
    graph = AdmissibleGraph(2, 2, ((-2, 1), (-1, 0)))
    sorted_graph, sign = star_order_form(graph)
    assert sorted_graph.stars == ((-2, 1), (-1, 0))
    assert sign == 1
    swapped, sign = star_order_form(graph.reorder_star(1, (1, 0)))
    assert swapped == sorted_graph
    assert sign == -1


def test_swapping_the_aerial_vertices_is_one_class_but_two_star_orders():
    graph = AdmissibleGraph(2, 2, ((1, -1), (-1, -2)))
    swapped = graph.relabel((1, 0))
    assert len(dedup_star_order([graph, swapped])) == 2
    assert len(group_by_class([graph, swapped])) == 1


def test_key_text():
    key = canonical_key(AdmissibleGraph.moyal(2))
    assert key_text(key) == "2.2:-2,-1|-2,-1"
    assert parse_key("2.2:-2,-1|-2,-1") == key
    assert parse_key("0.2:") == (0, 2, ())


def test_mirror_reflects_ground_points():
    assert AdmissibleGraph.wedge().mirror().stars == ((-2, -1),)
    assert AdmissibleGraph.hkr(3).mirror().mirror() == AdmissibleGraph.hkr(3)


def test_isolated_vertex_is_disconnected():
    graph = AdmissibleGraph(3, 0, ((1,), (0,), ()))
    assert not graph.is_connected()
    assert graph.untouched_ground() == []


def test_wedge_operator_is_the_bracket(so3):
    op = b_gamma(AdmissibleGraph.wedge(), [so3])
    for f in coordinates(3):
        for g in coordinates(3):
            assert op.apply((f, g)) == bivector_bracket(so3, f, g)


def test_degree_mismatch_gives_zero_operator():
    vector = PolyVectorField.basis(2, (1,))
    assert not b_gamma(AdmissibleGraph.wedge(), [vector])
    with pytest.raises(InvalidGraphError):
        b_gamma(AdmissibleGraph.wedge(), [])


def test_to_dict():
    assert AdmissibleGraph.wedge().to_dict() == {"n": 1, "m": 2, "stars": [[-1, -2]]}
