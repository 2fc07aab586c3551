"""
🧪 Domain parsing, validation, classification and general position
"""

import json
import math

import numpy as np
import pytest

from geocenter.config import Tolerances
from geocenter.domain import (
    LocationKind,
    build_domain,
    check_general_position,
    classify,
    emit_domain,
    free_direction_range,
    in_domain,
    in_interior,
    jitter_domain,
    load_domain,
    wedge_angle,
)
from geocenter.errors import OutsideDomain, ParseError, ValidationError
from geocenter.instances import d1, unit_square

SQUARE_JSON = '{"outer": [[0,0],[1,0],[1,1],[0,1]], "holes": []}'


class TestLoading:
    def test_load_square(self):
        dom = load_domain(SQUARE_JSON)
        assert dom.n == 4
        assert dom.h == 0
        assert dom.diameter == pytest.approx(math.sqrt(2))
        assert dom.eps == pytest.approx(1e-9 * math.sqrt(2))

    def test_orientation_is_normalized(self):
        # clockwise outer ring and counterclockwise hole on input
        dom = build_domain(
            [(0, 0), (0, 10), (10, 10), (10, 0)],
            [[(4, 4), (6, 4), (6, 6), (4, 6)]],
        )
        outer = dom.vertices[list(dom.rings[0])]
        hole = dom.vertices[list(dom.rings[1])]

        def area2(ring):
            x, y = ring[:, 0], ring[:, 1]
            return float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

        assert area2(outer) > 0
        assert area2(hole) < 0

    def test_explicit_closure_is_tolerated(self):
        dom = load_domain({"outer": [[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]})
        assert dom.n == 4

    def test_vertices_are_numbered_ring_by_ring(self):
        dom = d1()
        assert dom.rings == ((0, 1, 2, 3), (4, 5, 6, 7))
        assert dom.edges.tolist()[4] == [4, 5]
        assert dom.next_vertex[7] == 4
        assert dom.prev_vertex[0] == 3

    @pytest.mark.parametrize(
        "text",
        [
            "not json",
            "[1, 2]",
            '{"holes": []}',
            '{"outer": [[0, 0, 1], [1, 0, 1], [0, 1, 1]]}',
            '{"outer": "square"}',
            '{"outer": [[0,0],[1,0],[1,1]], "holes": 5}',
        ],
    )
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            load_domain(text)

    @pytest.mark.parametrize(
        "doc",
        [
            {"outer": [[0, 0], [1, 0]]},
            {"outer": [[0, 0], [1, 1], [1, 0], [0, 1]]},
            {"outer": [[0, 0], [1, 0], [2, 0]]},
            {"outer": [[0, 0], [1, 0], [1, 1], [1, 1], [0, 1]]},
            {"outer": [[0, 0], [1, 0], [1, 1], [0, 1]], "holes": [[[2, 2], [3, 2], [3, 3]]]},
            {
                "outer": [[0, 0], [10, 0], [10, 10], [0, 10]],
                "holes": [[[1, 1], [3, 1], [3, 3], [1, 3]], [[2, 2], [4, 2], [4, 4], [2, 4]]],
            },
            {"outer": [[0, 0], [10, 0], [10, 10], [0, 10]], "holes": [[[0, 2], [3, 2], [3, 4]]]},
        ],
        ids=["short", "bowtie", "flat", "repeated", "hole-outside", "holes-overlap", "hole-touches"],
    )
    def test_validation_errors(self, doc):
        with pytest.raises(ValidationError):
            load_domain(doc)

    def test_non_finite_coordinates(self):
        with pytest.raises(ValidationError):
            load_domain('{"outer": [[0, 0], [1, 0], [NaN, 1]]}')

    def test_emit_then_load_reproduces_vertices(self):
        dom = jitter_domain(d1(), seed=20160822)
        back = load_domain(emit_domain(dom))
        assert back.rings == dom.rings
        np.testing.assert_allclose(back.vertices, dom.vertices, atol=dom.eps)
        json.loads(emit_domain(dom))

    def test_jitter_is_seeded(self):
        a = jitter_domain(d1(), seed=7)
        b = jitter_domain(d1(), seed=7)
        c = jitter_domain(d1(), seed=8)
        np.testing.assert_array_equal(a.vertices, b.vertices)
        assert not np.allclose(a.vertices, c.vertices)
        assert np.max(np.abs(a.vertices - d1().vertices)) <= 1e-3


class TestClassify:
    def test_location_classes(self, square):
        dom, _ = square
        assert classify(dom, (0, 0)).kind is LocationKind.VERTEX
        assert classify(dom, (0, 0)).index == 0
        loc = classify(dom, (0.5, 0.0))
        assert loc.kind is LocationKind.EDGE
        assert loc.index == 0
        assert loc.param == pytest.approx(0.5)
        assert classify(dom, (0.5, 0.5)).kind is LocationKind.INTERIOR
        assert classify(dom, (2, 2)).kind is LocationKind.OUTSIDE

    def test_hole_is_outside(self, dom_d1):
        dom, _ = dom_d1
        assert classify(dom, (5, 5)).kind is LocationKind.OUTSIDE
        loc = classify(dom, (5, 4))
        assert loc.kind is LocationKind.EDGE
        assert loc.index == 7
        assert classify(dom, (4, 4)).to_json() == {"kind": "vertex", "index": 4}

    def test_membership_is_closed_and_interior_is_open(self, dom_d1):
        dom, _ = dom_d1
        pts = np.array([[1, 1], [5, 4], [5, 5], [0, 0], [11, 5]], dtype=float)
        np.testing.assert_array_equal(in_domain(dom, pts), [True, True, False, True, False])
        np.testing.assert_array_equal(in_interior(dom, pts), [True, False, False, False, False])

    def test_tolerances_scale_with_diameter(self):
        dom = d1(Tolerances(eps_len=1e-6))
        assert dom.eps == pytest.approx(1e-6 * math.hypot(10, 10))
        assert classify(dom, (5, 4 - 1e-6)).kind is LocationKind.EDGE


class TestFreeDirections:
    def test_wedge_angles(self, dom_d1):
        dom, _ = dom_d1
        assert wedge_angle(dom, 0) == pytest.approx(math.pi / 2)
        assert wedge_angle(dom, 4) == pytest.approx(3 * math.pi / 2)

    def test_free_range_by_location(self, square):
        dom, _ = square
        assert free_direction_range(dom, (0.3, 0.4)).full
        edge = free_direction_range(dom, (0.5, 0.0))
        assert edge.contains(0.0) and edge.contains(math.pi) and edge.contains(math.pi / 2)
        assert not edge.contains(3 * math.pi / 2)
        corner = free_direction_range(dom, (0.0, 0.0))
        assert corner.measure == pytest.approx(math.pi / 2)
        assert corner.contains(math.pi / 4)
        with pytest.raises(OutsideDomain):
            free_direction_range(dom, (-1, 0.5))

    def test_reflex_vertex_range(self, dom_d1):
        dom, _ = dom_d1
        r = free_direction_range(dom, (4, 4))
        assert r.measure == pytest.approx(3 * math.pi / 2)
        assert not r.contains(math.pi / 4)
        assert r.contains(5 * math.pi / 4)


class TestGeneralPosition:
    def test_square_is_clean(self, square):
        dom, graph = square
        report = check_general_position(dom, graph)
        assert report.clean
        assert report.paths_checked
        assert report.to_json() == {"clean": True, "collinear": [], "multi_path_pairs": [], "paths_checked": True}

    def test_axis_aligned_d1_is_dirty(self, dom_d1):
        dom, graph = dom_d1
        report = check_general_position(dom, graph)
        assert not report.clean
        # both diagonals of the outer square run through hole corners
        assert (0, 2, 4) in report.collinear
        assert (1, 3, 5) in report.collinear
        assert len(report.collinear) == 8
        # opposite hole corners are joined around both sides of the hole
        assert (4, 6) in report.multi_path_pairs

    def test_jitter_breaks_collinearity(self):
        dom = jitter_domain(d1(), seed=20160822)
        assert dom.report.collinear == []

    def test_unit_square_without_graph(self):
        report = check_general_position(unit_square())
        assert report.clean
        assert not report.paths_checked
