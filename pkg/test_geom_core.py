"""
🧪 Angles, points and circular direction ranges
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geocenter.errors import DegenerateInput
from geocenter.geom_core import (
    TWO_PI,
    DirectionRange,
    Point,
    angle_of,
    ccw_delta,
    closed_halfplane_range,
    halfplane_range,
    normalize_angle,
    range_intersect,
    segment_point_distance,
    wrap_pi,
)

angles = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)


def test_point_rejects_non_finite():
    with pytest.raises(DegenerateInput):
        Point(float("nan"), 0.0)
    with pytest.raises(DegenerateInput):
        Point(0.0, float("inf"))


def test_point_of_accepts_sequences_and_arrays():
    assert Point.of((1, 2)) == Point(1.0, 2.0)
    assert Point.of(np.array([3.0, -1.0])) == Point(3.0, -1.0)
    p = Point(0.5, 0.5)
    assert Point.of(p) is p
    assert tuple(p) == (0.5, 0.5)


@given(angles)
def test_normalize_angle_lands_in_half_open_circle(a):
    r = normalize_angle(a)
    assert 0.0 <= r < TWO_PI
    assert math.isclose(math.cos(r), math.cos(a), abs_tol=1e-9)
    assert math.isclose(math.sin(r), math.sin(a), abs_tol=1e-9)


@given(angles)
def test_wrap_pi_is_signed(a):
    r = wrap_pi(a)
    assert -math.pi < r <= math.pi
    assert math.isclose(math.cos(r), math.cos(a), abs_tol=1e-9)


def test_normalize_angle_of_tiny_negative_is_zero_or_below_two_pi():
    assert normalize_angle(-1e-300) < TWO_PI


def test_angle_of_and_coincident_points():
    assert angle_of((0, 0), (1, 0)) == 0.0
    assert angle_of((0, 0), (0, 1)) == pytest.approx(math.pi / 2)
    assert angle_of((0, 0), (0, -1)) == pytest.approx(3 * math.pi / 2)
    with pytest.raises(DegenerateInput):
        angle_of((1, 1), (1, 1))


def test_ccw_delta():
    assert ccw_delta(0.0, math.pi / 2) == pytest.approx(math.pi / 2)
    assert ccw_delta(math.pi / 2, 0.0) == pytest.approx(3 * math.pi / 2)


def test_segment_point_distance_clamps_to_ends():
    a = np.array([[0.0, 0.0], [0.0, 0.0]])
    b = np.array([[1.0, 0.0], [0.0, 1.0]])
    d = segment_point_distance(np.array([2.0, 0.0]), a, b)
    assert d[0] == pytest.approx(1.0)
    assert d[1] == pytest.approx(2.0)


class TestDirectionRange:
    def test_interval_sweeps_counterclockwise(self):
        r = DirectionRange.interval(3 * math.pi / 2, math.pi / 2)
        assert r.measure == pytest.approx(math.pi)
        assert r.contains(0.0)
        assert not r.contains(math.pi)

    def test_open_and_closed_endpoints(self):
        open_r = halfplane_range(0.0)
        closed_r = closed_halfplane_range(0.0)
        assert not open_r.contains(math.pi / 2)
        assert closed_r.contains(0.0)
        assert closed_r.contains(math.pi)
        assert not closed_r.contains(3 * math.pi / 2)

    def test_full_and_empty(self):
        assert DirectionRange.interval(0.0, TWO_PI).full
        assert DirectionRange.everything().measure == pytest.approx(TWO_PI)
        assert DirectionRange.nothing().is_empty()
        assert DirectionRange.everything().to_json() == "full"
        assert DirectionRange.nothing().to_json() == "empty"
        assert DirectionRange.nothing().midpoint_direction() is None

    def test_opposite_half_planes_do_not_meet(self):
        r = range_intersect([halfplane_range(0.0), halfplane_range(math.pi)], 1e-12)
        assert r.is_empty(1e-12)

    def test_orthogonal_half_planes_leave_a_quarter(self):
        r = range_intersect([halfplane_range(0.0), halfplane_range(math.pi / 2)])
        assert r.measure == pytest.approx(math.pi / 2)
        assert r.contains(math.pi / 4)

    def test_wrapping_intersection(self):
        a = DirectionRange.interval(3 * math.pi / 2, 5 * math.pi / 2)
        b = DirectionRange.interval(-math.pi / 4, math.pi / 4)
        r = a.intersect(b)
        assert r.measure == pytest.approx(math.pi / 2)
        assert len(r.intervals) == 1
        assert r.intervals[0].start == pytest.approx(7 * math.pi / 4)

    def test_closed_meets_open_on_a_quarter(self):
        r = range_intersect([closed_halfplane_range(0.0), halfplane_range(math.pi)])
        assert r.measure == pytest.approx(math.pi / 2)
        assert r.contains(3 * math.pi / 4)
        assert not r.contains(math.pi / 4)

    def test_midpoint_direction(self):
        assert DirectionRange.interval(0.0, math.pi / 2).midpoint_direction() == pytest.approx(math.pi / 4)

    def test_slivers_are_dropped(self):
        a = DirectionRange.interval(0.0, 1.0)
        b = DirectionRange.interval(1.0 - 1e-12, 2.0)
        assert range_intersect([a, b], 1e-9).is_empty()

    def test_full_is_neutral(self):
        h = halfplane_range(1.0)
        r = range_intersect([DirectionRange.everything(), h])
        assert r.measure == pytest.approx(math.pi)

    def test_to_json_lists_intervals(self):
        out = halfplane_range(math.pi / 2).to_json()
        assert len(out) == 1
        assert out[0]["start"] == pytest.approx(0.0)
        assert out[0]["end"] == pytest.approx(math.pi)
        assert out[0]["start_open"] and out[0]["end_open"]


@settings(max_examples=200, deadline=None)
@given(angles, angles, angles)
def test_intersection_is_contained_in_both(n1, n2, probe):
    a, b = halfplane_range(n1), halfplane_range(n2)
    r = a.intersect(b)
    if r.contains(probe, margin=1e-9):
        assert a.contains(probe) and b.contains(probe)
    assert r.measure <= min(a.measure, b.measure) + 1e-12


@settings(max_examples=200, deadline=None)
@given(angles, angles)
def test_intersection_measure_is_symmetric(n1, n2):
    a, b = halfplane_range(n1), halfplane_range(n2)
    assert a.intersect(b).measure == pytest.approx(b.intersect(a).measure, abs=1e-12)
    # two open half-planes overlap on π minus the angle between their normals
    gap = abs(wrap_pi(n1 - n2))
    assert a.intersect(b).measure == pytest.approx(max(0.0, math.pi - gap), abs=1e-9)
