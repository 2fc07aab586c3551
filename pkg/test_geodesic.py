"""
🧪 Geodesic distances, tied shortest paths and pivots
"""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from geocenter.errors import OutsideDomain, PathExplosion
from geocenter.geodesic import (
    SourceField,
    all_shortest_paths,
    distance,
    multi_path_vertex_pairs,
    path_count,
    pivot_sets,
)

TWO_PLUS_TWO_ROOT5 = 2.0 + 2.0 * math.sqrt(5.0)

coord = st.floats(min_value=0.0, max_value=10.0, allow_nan=False)
d1_points = st.tuples(coord, coord).filter(lambda p: not (3.9 < p[0] < 6.1 and 3.9 < p[1] < 6.1))


def test_distance_around_the_hole(dom_d1):
    dom, graph = dom_d1
    assert distance(dom, graph, (2, 5), (8, 5)) == pytest.approx(TWO_PLUS_TWO_ROOT5, abs=1e-9)


def test_two_tied_paths_around_the_hole(dom_d1):
    dom, graph = dom_d1
    paths = all_shortest_paths(dom, graph, (2, 5), (8, 5))
    assert len(paths) == 2
    assert {p.vertex_ids for p in paths} == {(4, 7), (5, 6)}
    for p in paths:
        assert p.length == pytest.approx(TWO_PLUS_TWO_ROOT5, abs=1e-9)
        assert p.waypoints[0].x == 2 and p.waypoints[-1].x == 8
    assert {p.s_pivot for p in paths} == {4, 5}
    assert {p.t_pivot for p in paths} == {6, 7}


def test_pivot_sets(dom_d1):
    dom, graph = dom_d1
    pivots = pivot_sets(dom, graph, (2, 5), (8, 5))
    assert pivots.couples == frozenset({(4, 7), (5, 6)})
    assert pivots.coupled_with(6) == [5]
    assert pivots.to_json() == {"s_pivots": [4, 5], "t_pivots": [6, 7], "couples": [[4, 7], [5, 6]]}
    assert path_count(pivots, direct=False) == 2


def test_visible_pair_has_one_straight_path(dom_d1):
    dom, graph = dom_d1
    paths = all_shortest_paths(dom, graph, (1, 1), (2, 2))
    assert len(paths) == 1
    assert paths[0].vertex_ids == ()
    assert paths[0].length == pytest.approx(math.sqrt(2))
    assert pivot_sets(dom, graph, (1, 1), (2, 2)).empty


def test_zero_distance(dom_d1):
    dom, graph = dom_d1
    assert distance(dom, graph, (3, 3), (3, 3)) == 0.0
    assert distance(dom, graph, (4, 4), (4, 4)) == 0.0


def test_vertex_to_vertex(dom_d1):
    dom, graph = dom_d1
    assert distance(dom, graph, (4, 4), (6, 6)) == pytest.approx(4.0)
    assert len(all_shortest_paths(dom, graph, (4, 4), (6, 6))) == 2


def test_path_cap(dom_d1):
    dom, graph = dom_d1
    with pytest.raises(PathExplosion):
        all_shortest_paths(dom, graph, (2, 5), (8, 5), cap=1)


def test_outside_points_raise(dom_d1):
    dom, graph = dom_d1
    with pytest.raises(OutsideDomain):
        distance(dom, graph, (5, 5), (1, 1))


def test_multi_path_vertex_pairs(dom_d1, square):
    dom, graph = dom_d1
    pairs = multi_path_vertex_pairs(dom, graph)
    assert (4, 6) in pairs and (5, 7) in pairs
    assert multi_path_vertex_pairs(*square) == []


def test_source_field_matches_two_point_queries(dom_d1, rng):
    dom, graph = dom_d1
    pts = rng.uniform(0, 10, size=(40, 2))
    pts = pts[~((pts[:, 0] > 3.9) & (pts[:, 0] < 6.1) & (pts[:, 1] > 3.9) & (pts[:, 1] < 6.1))]
    field = SourceField.build(dom, graph, (2, 5))
    fast, _ = field.distances(pts)
    slow = np.array([distance(dom, graph, (2, 5), p) for p in pts])
    np.testing.assert_allclose(fast, slow, atol=1e-9)


def test_source_field_at_a_vertex_reuses_apsp(dom_d1):
    dom, graph = dom_d1
    field = SourceField.build(dom, graph, (4, 4))
    assert field.vertex == 4
    np.testing.assert_allclose(field.to_vertex, graph.apsp[4])
    assert field.distance((6, 6)) == pytest.approx(4.0)


def test_source_field_couples(dom_d1):
    dom, graph = dom_d1
    field = SourceField.build(dom, graph, (2, 5))
    d, pivots, direct = field.couples((8, 5))
    assert not direct
    assert d == pytest.approx(TWO_PLUS_TWO_ROOT5)
    assert pivots.couples == frozenset({(4, 7), (5, 6)})


@settings(max_examples=40, deadline=None)
@given(d1_points, d1_points, d1_points)
def test_metric_axioms(dom_d1, a, b, c):
    dom, graph = dom_d1
    assume(len({a, b, c}) == 3)
    ab = distance(dom, graph, a, b)
    ba = distance(dom, graph, b, a)
    bc = distance(dom, graph, b, c)
    ac = distance(dom, graph, a, c)
    assert ab == pytest.approx(ba, abs=1e-9)
    assert ac <= ab + bc + 1e-9
    assert ab >= math.hypot(b[0] - a[0], b[1] - a[1]) - 1e-9
