"""
🧪 Center search, grid oracle and descent polish on the unit square
"""

import math

import pytest

from geocenter.center import (
    SolveOptions,
    brute_force_center,
    corollary10_check,
    grid_points,
    local_refine,
    solve,
)
from geocenter.errors import NoProgress, OutsideDomain

RADIUS = math.sqrt(2.0) / 2.0


@pytest.fixture(scope="module")
def square_result(square):
    dom, graph = square
    return solve(dom, graph)


def test_square_center(square_result):
    assert square_result.radius == pytest.approx(RADIUS, abs=1e-9)
    assert len(square_result.centers) == 1
    c = square_result.centers[0]
    assert (c.x, c.y) == pytest.approx((0.5, 0.5), abs=1e-9)
    assert square_result.provenance[0] != "refined"
    assert square_result.verdicts == [True]


def test_result_json(square_result):
    out = square_result.to_json()
    assert set(out) == {
        "radius",
        "centers",
        "provenance",
        "necessary_condition",
        "farthest",
        "candidates",
        "evaluated",
    }
    assert out["necessary_condition"] == ["empty"]
    assert out["evaluated"] <= out["candidates"]


def test_solve_without_degenerate_generator(square):
    dom, graph = square
    res = solve(dom, graph, SolveOptions(use_degenerate=False, refine_seeds=0))
    assert res.radius == pytest.approx(RADIUS, abs=1e-9)


class TestOracle:
    def test_grid_points_stay_in_the_domain(self, square):
        dom, _ = square
        pts = grid_points(dom, 0.25)
        assert len(pts) == 25
        assert pts.min() >= 0.0 and pts.max() <= 1.0

    def test_brackets_the_radius(self, square):
        dom, graph = square
        res = brute_force_center(dom, graph, 0.02)
        assert res.value - res.bound <= RADIUS <= res.value
        assert math.hypot(res.point.x - 0.5, res.point.y - 0.5) <= 0.03
        assert set(res.to_json()) == {"point", "value", "bound"}

    @pytest.mark.parametrize("h", [0.0, -0.1])
    def test_rejects_non_positive_spacing(self, square, h):
        dom, graph = square
        with pytest.raises(ValueError):
            brute_force_center(dom, graph, h)


class TestLocalRefine:
    def test_descends_to_the_center(self, square):
        dom, graph = square
        p = local_refine(dom, graph, (0.4, 0.5))
        assert math.hypot(p.x - 0.5, p.y - 0.5) <= 1e-6

    def test_center_is_a_fixed_point(self, square):
        dom, graph = square
        p = local_refine(dom, graph, (0.5, 0.5))
        assert (p.x, p.y) == (0.5, 0.5)

    def test_outside_start(self, square):
        dom, graph = square
        with pytest.raises(OutsideDomain):
            local_refine(dom, graph, (2.0, 2.0))

    def test_no_rounds_left(self, square):
        dom, graph = square
        with pytest.raises(NoProgress) as info:
            local_refine(dom, graph, (0.4, 0.5), max_iter=0)
        assert (info.value.point.x, info.value.point.y) == (0.4, 0.5)


def test_no_descent_at_the_center(square):
    dom, graph = square
    assert corollary10_check(dom, graph, (0.5, 0.5)) <= 1e-12
    assert corollary10_check(dom, graph, (0.4, 0.5)) > 0.0
