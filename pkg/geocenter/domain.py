"""
🗺️ POLYGONAL DOMAIN MODEL
Outer boundary plus holes, validated with shapely, stored as flat numpy arrays.

- Outer ring is forced counterclockwise and holes clockwise, so the domain
  interior lies to the left of every directed boundary edge.
- Vertices are numbered ring by ring: the outer ring first, then each hole.
- Edge i runs from vertex edges[i, 0] to vertex edges[i, 1].

Usage:
    dom = load_domain('{"outer": [[0,0],[1,0],[1,1],[0,1]], "holes": []}')
    loc = classify(dom, (0.5, 0.0))      # EdgeInterior on the bottom edge
"""

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import shapely
from shapely.geometry import LinearRing, Polygon

from .config import Tolerances
from .errors import OutsideDomain, ParseError, ValidationError
from .geom_core import (
    TWO_PI,
    DirectionRange,
    Point,
    PointLike,
    angle_of,
    closed_halfplane_range,
    cross,
    segment_point_distance,
    xy,
)

logger = logging.getLogger(__name__)


class LocationKind(Enum):
    VERTEX = "vertex"
    EDGE = "edge"
    INTERIOR = "interior"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class PointLocation:
    """Where a point sits relative to the domain

    index is the vertex index for VERTEX and the edge index for EDGE.
    param is the position along the edge, strictly inside (0, 1).
    """

    kind: LocationKind
    index: Optional[int] = None
    param: Optional[float] = None

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind.value}
        if self.index is not None:
            out["index"] = self.index
        if self.param is not None:
            out["param"] = self.param
        return out


@dataclass
class GeneralPositionReport:
    collinear: List[Tuple[int, int, int]] = field(default_factory=list)
    multi_path_pairs: List[Tuple[int, int]] = field(default_factory=list)
    paths_checked: bool = False

    @property
    def clean(self) -> bool:
        return not self.collinear and not self.multi_path_pairs

    def to_json(self) -> Dict[str, Any]:
        return {
            "clean": self.clean,
            "collinear": [list(t) for t in self.collinear],
            "multi_path_pairs": [list(p) for p in self.multi_path_pairs],
            "paths_checked": self.paths_checked,
        }


@dataclass(eq=False)
class PolygonalDomain:
    vertices: np.ndarray
    rings: Tuple[Tuple[int, ...], ...]
    edges: np.ndarray
    shape: Polygon
    tolerances: Tolerances = field(default_factory=Tolerances)
    report: Optional[GeneralPositionReport] = None

    def __post_init__(self):
        n = len(self.vertices)
        self.prev_vertex = np.empty(n, dtype=int)
        self.next_vertex = np.empty(n, dtype=int)
        self.ring_of = np.empty(n, dtype=int)
        for r, ring in enumerate(self.rings):
            k = len(ring)
            for j, v in enumerate(ring):
                self.prev_vertex[v] = ring[j - 1]
                self.next_vertex[v] = ring[(j + 1) % k]
                self.ring_of[v] = r
        self.edge_a = self.vertices[self.edges[:, 0]]
        self.edge_b = self.vertices[self.edges[:, 1]]
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        self.bbox = (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))
        self.diameter = float(math.hypot(hi[0] - lo[0], hi[1] - lo[1]))
        self.eps = self.tolerances.length(self.diameter)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def h(self) -> int:
        return len(self.rings) - 1

    @property
    def outer(self) -> List[Point]:
        return [Point.of(self.vertices[i]) for i in self.rings[0]]

    @property
    def holes(self) -> List[List[Point]]:
        return [[Point.of(self.vertices[i]) for i in ring] for ring in self.rings[1:]]

    def vertex(self, i: int) -> Point:
        return Point.of(self.vertices[i])

    def edge_direction(self, e: int) -> np.ndarray:
        d = self.edge_b[e] - self.edge_a[e]
        return d / np.hypot(d[0], d[1])

    def vertex_index(self, p: PointLike) -> Optional[int]:
        """Index of the vertex within eps of p, if any"""
        d = np.hypot(*(self.vertices - xy(p)).T)
        i = int(np.argmin(d))
        return i if d[i] <= self.eps else None

    def with_tolerances(self, tolerances: Tolerances) -> "PolygonalDomain":
        return build_domain(
            self.vertices[list(self.rings[0])],
            [self.vertices[list(r)] for r in self.rings[1:]],
            tolerances,
        )


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------


def _as_ring(raw: Any, what: str) -> np.ndarray:
    if not isinstance(raw, (list, tuple, np.ndarray)):
        raise ParseError(f"{what} must be a list of [x, y] pairs")
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as e:
        raise ParseError(f"{what}: {e}") from e
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParseError(f"{what} must be a list of [x, y] pairs")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} has non-finite coordinates")
    if len(arr) >= 2 and np.allclose(arr[0], arr[-1]):
        # explicit closure is tolerated
        arr = arr[:-1]
    if len(arr) < 3:
        raise ValidationError(f"{what} needs at least 3 vertices")
    return arr


def build_domain(
    outer: Sequence[PointLike],
    holes: Sequence[Sequence[PointLike]] = (),
    tolerances: Optional[Tolerances] = None,
) -> PolygonalDomain:
    """Validate rings, fix orientation and assemble the domain arrays"""
    tolerances = tolerances or Tolerances()
    outer_arr = _as_ring([list(xy(p)) for p in outer], "outer")
    hole_arrs = [_as_ring([list(xy(p)) for p in hole], f"hole {k}") for k, hole in enumerate(holes)]

    outer_ring = LinearRing(outer_arr)
    if not outer_ring.is_simple:
        raise ValidationError("outer ring is self-intersecting")
    if not outer_ring.is_ccw:
        outer_arr = outer_arr[::-1]
    outer_poly = Polygon(outer_arr)
    if outer_poly.area <= tolerances.eps_len:
        raise ValidationError("outer ring has zero area")

    hole_polys = []
    for k, arr in enumerate(hole_arrs):
        ring = LinearRing(arr)
        if not ring.is_simple:
            raise ValidationError(f"hole {k} is self-intersecting")
        if ring.is_ccw:
            hole_arrs[k] = arr = arr[::-1]
        poly = Polygon(arr)
        if poly.area <= tolerances.eps_len:
            raise ValidationError(f"hole {k} has zero area")
        if not outer_poly.contains(poly) or outer_poly.exterior.intersects(poly.exterior):
            raise ValidationError(f"hole {k} is not strictly inside the outer ring")
        for j, other in enumerate(hole_polys):
            if not poly.disjoint(other):
                raise ValidationError(f"holes {j} and {k} overlap or touch")
        hole_polys.append(poly)

    all_arrs = [outer_arr] + hole_arrs
    vertices = np.vstack(all_arrs)
    scale = float(np.ptp(vertices, axis=0).max())
    eps = tolerances.length(scale)
    diffs = vertices[:, None, :] - vertices[None, :, :]
    dist = np.hypot(diffs[..., 0], diffs[..., 1])
    np.fill_diagonal(dist, np.inf)
    if dist.min() <= eps:
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        raise ValidationError(f"repeated vertex {tuple(vertices[i])} (indices {i}, {j})")

    rings: List[Tuple[int, ...]] = []
    edges: List[Tuple[int, int]] = []
    offset = 0
    for arr in all_arrs:
        ring = tuple(range(offset, offset + len(arr)))
        rings.append(ring)
        edges.extend((ring[j], ring[(j + 1) % len(ring)]) for j in range(len(ring)))
        offset += len(arr)

    shape = Polygon(outer_arr, [a for a in hole_arrs])
    shapely.prepare(shape)
    dom = PolygonalDomain(
        vertices=vertices,
        rings=tuple(rings),
        edges=np.asarray(edges, dtype=int),
        shape=shape,
        tolerances=tolerances,
    )
    dom.report = check_general_position(dom)
    logger.debug("✅ Domain built: n=%d h=%d", dom.n, dom.h)
    return dom


def load_domain(document: Union[str, Dict[str, Any]], tolerances: Optional[Tolerances] = None) -> PolygonalDomain:
    """Parse the JSON domain format and validate it"""
    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e}") from e
    else:
        data = document
    if not isinstance(data, dict) or "outer" not in data:
        raise ParseError('domain document must be an object with an "outer" ring')
    holes = data.get("holes") or []
    if not isinstance(holes, list):
        raise ParseError('"holes" must be a list of rings')
    return build_domain(data["outer"], holes, tolerances)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit_domain(dom: PolygonalDomain) -> str:
    """JSON text that load_domain reads back to the same domain"""

    def ring_text(ring: Tuple[int, ...]) -> str:
        return "[" + ", ".join(
            f"[{_fmt(dom.vertices[i, 0])}, {_fmt(dom.vertices[i, 1])}]" for i in ring
        ) + "]"

    holes = ", ".join(ring_text(r) for r in dom.rings[1:])
    return f'{{"outer": {ring_text(dom.rings[0])}, "holes": [{holes}]}}'


def jitter_domain(dom: PolygonalDomain, seed: int, amplitude: float = 1e-3) -> PolygonalDomain:
    rng = np.random.default_rng(seed)
    moved = dom.vertices + rng.uniform(-amplitude, amplitude, size=dom.vertices.shape)
    outer = moved[list(dom.rings[0])]
    holes = [moved[list(r)] for r in dom.rings[1:]]
    logger.info("🎲 Jittered domain with seed %d, amplitude %g", seed, amplitude)
    return build_domain(outer, holes, dom.tolerances)


# --------------------------------------------------------------------------
# queries
# --------------------------------------------------------------------------


def classify(dom: PolygonalDomain, p: PointLike) -> PointLocation:
    q = xy(p)
    dv = np.hypot(dom.vertices[:, 0] - q[0], dom.vertices[:, 1] - q[1])
    i = int(np.argmin(dv))
    if dv[i] <= dom.eps:
        return PointLocation(LocationKind.VERTEX, i)
    de = segment_point_distance(q, dom.edge_a, dom.edge_b)
    e = int(np.argmin(de))
    if de[e] <= dom.eps:
        d = dom.edge_b[e] - dom.edge_a[e]
        t = float(np.dot(q - dom.edge_a[e], d) / np.dot(d, d))
        return PointLocation(LocationKind.EDGE, e, min(max(t, 1e-15), 1.0 - 1e-15))
    if shapely.contains_xy(dom.shape, q[0], q[1]):
        return PointLocation(LocationKind.INTERIOR)
    return PointLocation(LocationKind.OUTSIDE)


def in_domain(dom: PolygonalDomain, points: np.ndarray) -> np.ndarray:
    """Closed membership for many points at once"""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    inside = shapely.contains_xy(dom.shape, pts[:, 0], pts[:, 1])
    if np.all(inside):
        return inside
    boundary = shapely.distance(dom.shape.boundary, shapely.points(pts)) <= dom.eps
    return inside | boundary


def in_interior(dom: PolygonalDomain, points: np.ndarray, margin: Optional[float] = None) -> np.ndarray:
    """Open membership: inside and farther than margin from the boundary"""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    margin = dom.eps if margin is None else margin
    inside = shapely.contains_xy(dom.shape, pts[:, 0], pts[:, 1])
    if not np.any(inside):
        return inside
    far = shapely.distance(dom.shape.boundary, shapely.points(pts)) > margin
    return inside & far


def wedge_angle(dom: PolygonalDomain, i: int) -> float:
    """Angle of the domain wedge at vertex i, in (0, 2π)"""
    v = dom.vertices[i]
    out_dir = angle_of(v, dom.vertices[dom.next_vertex[i]])
    back_dir = angle_of(v, dom.vertices[dom.prev_vertex[i]])
    size = (back_dir - out_dir) % TWO_PI
    return size


def free_direction_range(dom: PolygonalDomain, p: PointLike) -> DirectionRange:
    loc = classify(dom, p)
    if loc.kind is LocationKind.OUTSIDE:
        raise OutsideDomain(f"point {tuple(xy(p))} is outside the domain")
    if loc.kind is LocationKind.INTERIOR:
        return DirectionRange.everything()
    if loc.kind is LocationKind.EDGE:
        e = loc.index
        return closed_halfplane_range(angle_of(dom.edge_a[e], dom.edge_b[e]))
    i = loc.index
    start = angle_of(dom.vertices[i], dom.vertices[dom.next_vertex[i]])
    return DirectionRange.interval(start, start + wedge_angle(dom, i), False, False)


def collinear_triples(dom: PolygonalDomain) -> List[Tuple[int, int, int]]:
    """Vertex triples whose triangle is flatter than eps"""
    n = dom.n
    if n < 3:
        return []
    triples = np.array(list(itertools.combinations(range(n), 3)), dtype=int)
    a = dom.vertices[triples[:, 0]]
    b = dom.vertices[triples[:, 1]]
    c = dom.vertices[triples[:, 2]]
    area2 = np.abs(cross(b - a, c - a))
    # height over the longest side of each triangle
    longest = np.max(
        np.stack([np.hypot(*(b - a).T), np.hypot(*(c - a).T), np.hypot(*(c - b).T)]), axis=0
    )
    height = area2 / longest
    bad = np.nonzero(height <= dom.eps)[0]
    return [tuple(int(v) for v in triples[k]) for k in bad]


def check_general_position(dom: PolygonalDomain, graph: Any = None) -> GeneralPositionReport:
    """Collinear vertex triples, plus multi-path vertex pairs when a visibility graph is given"""
    report = GeneralPositionReport(collinear=collinear_triples(dom))
    if graph is not None:
        from .geodesic import multi_path_vertex_pairs

        report.multi_path_pairs = multi_path_vertex_pairs(dom, graph)
        report.paths_checked = True
    if report.clean:
        logger.debug("✅ General position holds")
    else:
        logger.info(
            "⚠️ General position violated: %d collinear triples, %d multi-path pairs",
            len(report.collinear),
            len(report.multi_path_pairs),
        )
    return report
