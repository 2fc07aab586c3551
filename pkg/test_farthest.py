"""
🧪 d_max, farthest-point sets and the weighted equidistance solvers
"""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from geocenter.center import grid_dmax
from geocenter.domain import LocationKind, PointLocation
from geocenter.errors import DegenerateInput, OutsideDomain
from geocenter.farthest import (
    apollonius,
    dmax_and_farthest,
    is_degenerate,
    obs10_check,
    pair_roots_on_segment,
    vertex_lower_bound,
    weighted_equidistant,
)
from geocenter.geodesic import PivotSets, SourceField
from geocenter.instances import d3
from geocenter.visibility import build_visibility_graph

RADIUS_D3 = 3.0 + math.sqrt(1.04)


class TestWeightedEquidistant:
    def test_residual_of_the_mixed_weight_triple(self):
        sols = weighted_equidistant([((0, 0), 0.0), ((2, 0), 0.0), ((1, 3), 1.0)])
        assert sols
        for t in sols:
            f = [math.hypot(t.x, t.y), math.hypot(t.x - 2, t.y), 1.0 + math.hypot(t.x - 1, t.y - 3)]
            assert max(f) - min(f) < 1e-10
            assert t.x == pytest.approx(1.0)

    def test_unweighted_triple_is_the_circumcenter(self):
        sols = weighted_equidistant([((0, 0), 0.0), ((1, 0), 0.0), ((0, 1), 0.0)])
        assert len(sols) == 1
        assert (sols[0].x, sols[0].y) == pytest.approx((0.5, 0.5))

    def test_bad_site_sets(self):
        with pytest.raises(DegenerateInput):
            weighted_equidistant([((0, 0), 0.0), ((1, 0), 0.0)])
        with pytest.raises(DegenerateInput):
            weighted_equidistant([((0, 0), 0.0), ((0, 0), 1.0), ((1, 1), 0.0)])


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(min_value=-5, max_value=5, allow_nan=False), min_size=6, max_size=6),
    st.lists(st.floats(min_value=0, max_value=2, allow_nan=False), min_size=3, max_size=3),
)
def test_apollonius_solutions_are_equidistant(coords, weights):
    pts = np.array(coords, dtype=float).reshape(1, 3, 2)
    w = np.array(weights, dtype=float).reshape(1, 3)
    q2, q3 = pts[0, 1] - pts[0, 0], pts[0, 2] - pts[0, 0]
    spread = max(float(q2 @ q2), float(q3 @ q3))
    assume(abs(q2[0] * q3[1] - q2[1] * q3[0]) > 1e-3 * max(spread, 1e-3))
    sols, valid = apollonius(pts, w)
    for k in range(2):
        if not valid[0, k]:
            continue
        t = sols[0, k]
        f = w[0] + np.hypot(pts[0, :, 0] - t[0], pts[0, :, 1] - t[1])
        scale = max(1.0, float(np.abs(sols).max()), float(np.ptp(pts[0], axis=0).max()))
        assert np.ptp(f) <= 1e-5 * scale


def test_pair_roots_on_segment():
    a, b = np.array([0.0, 0.0]), np.array([4.0, 0.0])
    sites = np.array([[0.0, 1.0], [4.0, 1.0]])
    lam, i, j = pair_roots_on_segment(a, b, sites, np.zeros(2))
    assert len(lam) >= 1
    np.testing.assert_allclose(lam, 0.5)
    assert set(zip(i.tolist(), j.tolist())) == {(0, 1)}

    weights = np.array([1.0, 0.0])
    lam, _, _ = pair_roots_on_segment(a, b, sites, weights)
    assert len(lam) >= 1
    for t in a + lam[:, None] * (b - a):
        assert 1.0 + math.hypot(*(t - sites[0])) == pytest.approx(math.hypot(*(t - sites[1])), abs=1e-6)


def test_is_degenerate_limits():
    assert not is_degenerate(PointLocation(LocationKind.VERTEX, 0), 1)
    assert is_degenerate(PointLocation(LocationKind.VERTEX, 0), 2)
    assert not is_degenerate(PointLocation(LocationKind.EDGE, 0, 0.5), 2)
    assert is_degenerate(PointLocation(LocationKind.EDGE, 0, 0.5), 3)
    assert not is_degenerate(PointLocation(LocationKind.INTERIOR), 3)
    assert is_degenerate(PointLocation(LocationKind.INTERIOR), 4)


class TestPivotPlacement:
    def test_interior_needs_t_inside_the_pivot_triangle(self, dom_d1):
        dom, _ = dom_d1
        # hole corners 4, 5, 7 span a triangle containing (4.5, 4.5)
        pivots = PivotSets(frozenset({(0, 4), (1, 5), (2, 7)}))
        assert obs10_check(dom, (4.5, 4.5), PointLocation(LocationKind.INTERIOR), pivots)
        assert not obs10_check(dom, (8, 8), PointLocation(LocationKind.INTERIOR), pivots)

    def test_edge_needs_pivots_on_both_sides(self, dom_d1):
        dom, _ = dom_d1
        # bottom outer edge, pivots at the two lower hole corners
        loc = PointLocation(LocationKind.EDGE, 0, 0.5)
        assert obs10_check(dom, (5, 0), loc, PivotSets(frozenset({(0, 4), (1, 7)})))
        assert not obs10_check(dom, (8, 0), loc, PivotSets(frozenset({(0, 4), (1, 7)})))


class TestDmaxAndFarthest:
    def test_square_center(self, square):
        dom, graph = square
        rep = dmax_and_farthest(dom, graph, (0.5, 0.5))
        assert rep.dmax == pytest.approx(math.sqrt(0.5))
        assert len(rep.farthest) == 4
        assert all(fp.location.kind is LocationKind.VERTEX and fp.direct for fp in rep.farthest)
        assert not rep.any_degenerate

    def test_square_corner(self, square):
        dom, graph = square
        rep = dmax_and_farthest(dom, graph, (0, 0))
        assert rep.dmax == pytest.approx(math.sqrt(2))
        assert [(fp.point.x, fp.point.y) for fp in rep.farthest] == [pytest.approx((1.0, 1.0))]

    def test_d1_left_of_the_hole(self, dom_d1):
        dom, graph = dom_d1
        rep = dmax_and_farthest(dom, graph, (2, 5))
        assert rep.dmax == pytest.approx(math.sqrt(89))
        corners = {(round(fp.point.x, 6), round(fp.point.y, 6)) for fp in rep.farthest}
        assert corners == {(10.0, 0.0), (10.0, 10.0)}

    def test_d1_against_grid_oracle(self, dom_d1):
        dom, graph = dom_d1
        h = 0.25
        lower = grid_dmax(dom, graph, (2, 5), h)
        rep = dmax_and_farthest(dom, graph, (2, 5))
        assert lower - 1e-9 <= rep.dmax <= lower + h + 1e-9

    def test_d3_notch_has_a_single_edge_farthest_point(self, dom_d3):
        dom, graph = dom_d3
        rep = dmax_and_farthest(dom, graph, (0, 1))
        assert rep.dmax == pytest.approx(RADIUS_D3, rel=1e-9)
        assert len(rep.farthest) == 1
        fp = rep.farthest[0]
        assert (fp.point.x, fp.point.y) == pytest.approx((0.0, -1.2), abs=1e-7)
        assert fp.location.kind is LocationKind.EDGE
        assert fp.location.index == 0
        assert fp.path_count == 2
        assert not fp.degenerate

    def test_near_points_with_slack(self, dom_d1):
        dom, graph = dom_d1
        rep = dmax_and_farthest(dom, graph, (2, 5), slack=3.0)
        assert len(rep.near) > len(rep.farthest)
        assert all(fp.value >= rep.dmax - 3.0 for fp in rep.near)
        assert "near" in rep.to_json()

    def test_outside_source(self, dom_d1):
        dom, graph = dom_d1
        with pytest.raises(OutsideDomain):
            dmax_and_farthest(dom, graph, (5, 5))

    def test_vertex_lower_bound(self, dom_d1):
        dom, graph = dom_d1
        field = SourceField.build(dom, graph, (2, 5))
        lb = vertex_lower_bound(field)
        assert lb <= dmax_and_farthest(dom, graph, (2, 5)).dmax + 1e-12
        assert lb == pytest.approx(math.sqrt(89))


def test_d3_notch_depth_moves_the_radius():
    dom = d3(notch=0.1)
    graph = build_visibility_graph(dom)
    rep = dmax_and_farthest(dom, graph, (0, 1))
    assert rep.dmax == pytest.approx(RADIUS_D3, rel=1e-9)
