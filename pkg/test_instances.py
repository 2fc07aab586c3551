"""
🧪 Named instances and seeded random domains
"""

import math

import numpy as np
import pytest

from geocenter.errors import ParseError
from geocenter.instances import INSTANCES, JITTER_SEED, d2, get_instance, jittered, random_convex, random_domain


@pytest.mark.parametrize("name,n,holes", [("unit_square", 4, 0), ("D1", 8, 1), ("D2", 6, 1), ("D3", 11, 1)])
def test_named_instances(name, n, holes):
    dom = get_instance(name)
    assert (dom.n, dom.h) == (n, holes)


def test_unknown_instance():
    with pytest.raises(ParseError, match="unknown instance"):
        get_instance("D9")
    assert sorted(INSTANCES) == ["D1", "D2", "D3", "unit_square"]


def test_triangles_share_the_centroid():
    dom = d2()
    outer = dom.vertices[list(dom.rings[0])]
    inner = dom.vertices[list(dom.rings[1])]
    np.testing.assert_allclose(outer.mean(axis=0), [0.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(inner.mean(axis=0), [0.0, 0.0], atol=1e-12)
    assert np.hypot(*outer.T).max() == pytest.approx(3.0)
    assert np.hypot(*inner.T).max() == pytest.approx(2.0)


def test_jitter_is_reproducible():
    a, b = jittered("D1"), jittered("D1")
    np.testing.assert_array_equal(a.vertices, b.vertices)
    moved = np.abs(a.vertices - get_instance("D1").vertices)
    assert 0.0 < moved.max() <= 1e-3
    assert not np.array_equal(a.vertices, jittered("D1", seed=JITTER_SEED + 1).vertices)


def test_random_convex_is_counterclockwise(rng):
    pts = random_convex(rng, 7)
    x, y = pts[:, 0], pts[:, 1]
    area2 = float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    assert area2 > 0.0
    with pytest.raises(ValueError):
        random_convex(rng, 2)


def test_random_domains_are_valid(rng):
    for _ in range(10):
        dom = random_domain(rng, n_max=16, max_holes=2)
        assert dom.n <= 16
        assert dom.h <= 2
        assert math.isfinite(dom.diameter)
