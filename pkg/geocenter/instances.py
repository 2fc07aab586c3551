"""
📐 NAMED INSTANCES
Acceptance domains built in code, plus seeded random domains for property runs.

- unit_square: no holes, center (0.5, 0.5)
- D1: square [0,10]² with a square hole [4,6]²
- D2: concentric equilateral triangles sharing centroid and orientation
- D3: two concentric squares, the inner one notched at the middle of its top edge

Usage:
    dom = get_instance("D1")
    dom = jittered("D1")          # documented seed 20160822
"""

import logging
import math
from typing import Callable, Dict, List, Optional

import numpy as np

from .config import Tolerances
from .domain import PolygonalDomain, build_domain, jitter_domain
from .errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

JITTER_SEED = 20160822
NOTCH = 0.05


def unit_square(tolerances: Optional[Tolerances] = None) -> PolygonalDomain:
    return build_domain([(0, 0), (1, 0), (1, 1), (0, 1)], [], tolerances)


def d1(tolerances: Optional[Tolerances] = None) -> PolygonalDomain:
    outer = [(0, 0), (10, 0), (10, 10), (0, 10)]
    hole = [(4, 4), (4, 6), (6, 6), (6, 4)]
    return build_domain(outer, [hole], tolerances)


def _triangle(radius: float, clockwise: bool = False) -> List[tuple]:
    angles = [90.0, 210.0, 330.0]
    if clockwise:
        angles = angles[::-1]
    return [(radius * math.cos(math.radians(a)), radius * math.sin(math.radians(a))) for a in angles]


def d2(tolerances: Optional[Tolerances] = None, outer_radius: float = 3.0, inner_radius: float = 2.0) -> PolygonalDomain:
    return build_domain(_triangle(outer_radius), [_triangle(inner_radius, clockwise=True)], tolerances)


def d3(tolerances: Optional[Tolerances] = None, notch: float = NOTCH) -> PolygonalDomain:
    outer = [(-1.2, -1.2), (1.2, -1.2), (1.2, 1.2), (-1.2, 1.2)]
    hole = [(-1, -1), (-1, 1), (-notch, 1), (0, 1 - notch), (notch, 1), (1, 1), (1, -1)]
    return build_domain(outer, [hole], tolerances)


INSTANCES: Dict[str, Callable[..., PolygonalDomain]] = {
    "unit_square": unit_square,
    "D1": d1,
    "D2": d2,
    "D3": d3,
}


def get_instance(name: str, tolerances: Optional[Tolerances] = None) -> PolygonalDomain:
    try:
        factory = INSTANCES[name]
    except KeyError:
        raise ParseError(f"unknown instance {name!r}; choose from {', '.join(INSTANCES)}") from None
    return factory(tolerances)


def jittered(name: str, seed: int = JITTER_SEED, amplitude: float = 1e-3) -> PolygonalDomain:
    return jitter_domain(get_instance(name), seed, amplitude)


def random_convex(
    rng: np.random.Generator,
    k: int,
    center=(0.0, 0.0),
    radius: float = 1.0,
    min_gap: float = 0.05,
) -> np.ndarray:
    """Counterclockwise convex k-gon on a randomly stretched circle"""
    if k < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    for _ in range(1000):
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=k))
        gaps = np.diff(np.append(angles, angles[0] + 2.0 * math.pi))
        if gaps.min() >= min_gap and gaps.max() < math.pi:
            break
    else:
        angles = np.linspace(0.0, 2.0 * math.pi, k, endpoint=False)
    rx, ry = radius * rng.uniform(0.7, 1.0, size=2)
    pts = np.stack([rx * np.cos(angles), ry * np.sin(angles)], axis=1)
    return pts + np.asarray(center, dtype=float)


def random_domain(rng: np.random.Generator, n_max: int = 16, max_holes: int = 2, attempts: int = 200) -> PolygonalDomain:
    """Random convex outer ring with up to max_holes small convex holes"""
    for _ in range(attempts):
        holes_wanted = int(rng.integers(0, max_holes + 1))
        budget = n_max - 3 * holes_wanted
        if budget < 3:
            holes_wanted, budget = 0, n_max
        k_outer = int(rng.integers(3, min(budget, 8) + 1))
        outer = random_convex(rng, k_outer, radius=10.0)
        holes = []
        left = n_max - k_outer
        for _ in range(holes_wanted):
            if left < 3:
                break
            k = int(rng.integers(3, min(left, 4) + 1))
            c = rng.uniform(-4.0, 4.0, size=2)
            holes.append(random_convex(rng, k, center=c, radius=float(rng.uniform(0.8, 1.8))))
            left -= k
        try:
            return build_domain(outer, holes)
        except ValidationError as e:
            logger.debug("⚠️ Rejected random domain: %s", e)
    raise ValidationError(f"no valid random domain after {attempts} attempts")
