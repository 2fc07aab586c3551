"""
🧭 GEODESIC DISTANCE
Shortest paths in the domain, tied-path enumeration and pivot extraction.

Two-point queries run Dijkstra on the visibility graph augmented with s and t.
Hot loops (farthest points, oracles, candidate validation) use a SourceField
instead: distances from s to every vertex, from which d(s, t) for many t is a
vectorized min-plus step over the vertices each t sees.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .config import get_settings
from .domain import PolygonalDomain
from .errors import PathExplosion
from .geom_core import Point, PointLike, xy
from .visibility import VisibilityGraph, _require_inside, segments_visible, visible_mask

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeodesicPath:
    """A shortest path s, u1, ..., t; vertex_ids are the polygon vertices strictly between"""

    waypoints: Tuple[Point, ...]
    vertex_ids: Tuple[int, ...]
    length: float

    @property
    def s_pivot(self) -> Optional[int]:
        return self.vertex_ids[0] if self.vertex_ids else None

    @property
    def t_pivot(self) -> Optional[int]:
        return self.vertex_ids[-1] if self.vertex_ids else None

    def to_json(self) -> Dict:
        return {
            "waypoints": [[p.x, p.y] for p in self.waypoints],
            "vertices": list(self.vertex_ids),
            "length": self.length,
        }


@dataclass(frozen=True)
class PivotSets:
    """s-pivots, t-pivots and their coupling, as vertex indices"""

    couples: FrozenSet[Tuple[int, int]] = frozenset()

    @property
    def s_pivots(self) -> FrozenSet[int]:
        return frozenset(u for u, _ in self.couples)

    @property
    def t_pivots(self) -> FrozenSet[int]:
        return frozenset(v for _, v in self.couples)

    @property
    def empty(self) -> bool:
        return not self.couples

    def coupled_with(self, v: int) -> List[int]:
        return sorted(u for u, w in self.couples if w == v)

    def to_json(self) -> Dict:
        return {
            "s_pivots": sorted(self.s_pivots),
            "t_pivots": sorted(self.t_pivots),
            "couples": [list(c) for c in sorted(self.couples)],
        }


def vertex_visibility(dom: PolygonalDomain, points: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """(m, n) mask of polygon vertices seen from each point, excluding a coincident vertex"""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = dom.n
    out = np.empty((len(pts), n), dtype=bool)
    for lo in range(0, len(pts), chunk):
        block = pts[lo:lo + chunk]
        starts = np.repeat(block, n, axis=0)
        ends = np.tile(dom.vertices, (len(block), 1))
        out[lo:lo + chunk] = segments_visible(dom, starts, ends).reshape(len(block), n)
    gap = np.hypot(
        pts[:, None, 0] - dom.vertices[None, :, 0], pts[:, None, 1] - dom.vertices[None, :, 1]
    )
    out &= gap > dom.eps
    return out


@dataclass(eq=False)
class SourceField:
    """Geodesic distances from a fixed source to every polygon vertex"""

    dom: PolygonalDomain
    graph: VisibilityGraph
    point: np.ndarray
    vis: np.ndarray
    to_vertex: np.ndarray
    vertex: Optional[int] = None
    # _first_hop[u, v] = |s u| + d(u, v) for every u seen from s
    _first_hop: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def build(cls, dom: PolygonalDomain, graph: VisibilityGraph, s: PointLike) -> "SourceField":
        p = xy(s)
        k = dom.vertex_index(p)
        if k is not None:
            p = dom.vertices[k].copy()
            vis = graph.adjacency[k].copy()
            leg = np.hypot(*(dom.vertices - p).T)
            hop = np.where(vis[:, None], leg[:, None] + graph.apsp, np.inf)
            return cls(dom, graph, p, vis, graph.apsp[k].copy(), k, hop)
        vis = visible_mask(dom, p, dom.vertices)
        leg = np.hypot(*(dom.vertices - p).T)
        hop = np.where(vis[:, None], leg[:, None] + graph.apsp, np.inf)
        to_vertex = hop.min(axis=0) if dom.n else np.array([])
        return cls(dom, graph, p, vis, to_vertex, None, hop)

    @property
    def first_leg(self) -> np.ndarray:
        return np.where(self.vis, np.hypot(*(self.dom.vertices - self.point).T), np.inf)

    def distances(
        self, targets: np.ndarray, vis_targets: Optional[np.ndarray] = None
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Geodesic distances to many targets, plus the direct-visibility mask"""
        T = np.atleast_2d(np.asarray(targets, dtype=float))
        if vis_targets is None:
            vis_targets = vertex_visibility(self.dom, T)
        direct = visible_mask(self.dom, self.point, T)
        straight = np.hypot(T[:, 0] - self.point[0], T[:, 1] - self.point[1])
        last_leg = np.hypot(
            T[:, None, 0] - self.dom.vertices[None, :, 0], T[:, None, 1] - self.dom.vertices[None, :, 1]
        )
        via = np.where(vis_targets, self.to_vertex[None, :] + last_leg, np.inf).min(axis=1)
        return np.where(direct, straight, via), direct

    def distance(self, t: PointLike) -> float:
        d, _ = self.distances(xy(t)[None, :])
        return float(d[0])

    def couples(
        self, t: PointLike, vis_t: Optional[np.ndarray] = None, slack: Optional[float] = None
    ) -> Tuple[float, PivotSets, bool]:
        """d(s, t), the pivot coupling and whether s sees t"""
        q = xy(t)
        if vis_t is None:
            vis_t = vertex_visibility(self.dom, q)[0]
        d_all, direct = self.distances(q[None, :], vis_t[None, :])
        d = float(d_all[0])
        if direct[0]:
            return d, PivotSets(), True
        rel = get_settings().geodesic.rel_tol
        slack = max(self.dom.eps, rel * d) if slack is None else slack
        last_leg = np.hypot(*(self.dom.vertices - q).T)
        total = self._first_hop + np.where(vis_t, last_leg, np.inf)[None, :]
        uu, vv = np.nonzero(total <= d + slack)
        return d, PivotSets(frozenset(zip(uu.tolist(), vv.tolist()))), False


# --------------------------------------------------------------------------
# two-point queries on the augmented graph
# --------------------------------------------------------------------------


def _augment(
    dom: PolygonalDomain, graph: VisibilityGraph, s: np.ndarray, t: np.ndarray
) -> Tuple[nx.Graph, Hashable, Hashable]:
    h = graph.graph.copy()
    ends = []
    for label, p in (("s", s), ("t", t)):
        k = dom.vertex_index(p)
        if k is not None:
            ends.append(k)
            continue
        h.add_node(label, pos=p)
        mask = visible_mask(dom, p, dom.vertices)
        for v in np.nonzero(mask)[0].tolist():
            h.add_edge(label, v, weight=float(np.hypot(*(dom.vertices[v] - p))))
        ends.append(label)
    src, dst = ends
    if src == "s" and dst == "t" and bool(visible_mask(dom, s, t[None, :])[0]):
        h.add_edge("s", "t", weight=float(np.hypot(*(t - s))))
    return h, src, dst


def distance(dom: PolygonalDomain, graph: VisibilityGraph, s: PointLike, t: PointLike) -> float:
    _require_inside(dom, s)
    _require_inside(dom, t)
    p, q = xy(s), xy(t)
    if np.hypot(*(q - p)) <= dom.eps:
        return 0.0
    h, src, dst = _augment(dom, graph, p, q)
    if src == dst:
        return 0.0
    try:
        return float(nx.dijkstra_path_length(h, src, dst, weight="weight"))
    except nx.NetworkXNoPath:
        return float("inf")


def _node_xy(dom: PolygonalDomain, h: nx.Graph, node: Hashable) -> np.ndarray:
    if isinstance(node, str):
        return h.nodes[node]["pos"]
    return dom.vertices[node]


def all_shortest_paths(
    dom: PolygonalDomain,
    graph: VisibilityGraph,
    s: PointLike,
    t: PointLike,
    rel_tol: Optional[float] = None,
    cap: Optional[int] = None,
) -> List[GeodesicPath]:
    """Every path within rel_tol of the shortest, found by DFS over tight edges"""
    settings = get_settings().geodesic
    rel_tol = settings.rel_tol if rel_tol is None else rel_tol
    cap = settings.path_cap if cap is None else cap
    _require_inside(dom, s)
    _require_inside(dom, t)
    p, q = xy(s), xy(t)
    if np.hypot(*(q - p)) <= dom.eps:
        return [GeodesicPath((Point.of(p), Point.of(q)), (), 0.0)]

    h, src, dst = _augment(dom, graph, p, q)
    if src == dst:
        return [GeodesicPath((Point.of(p), Point.of(q)), (), 0.0)]
    to_dst = nx.single_source_dijkstra_path_length(h, dst, weight="weight")
    if src not in to_dst:
        return []
    d = to_dst[src]
    slack = max(dom.eps, rel_tol * d)

    found: List[Tuple[Hashable, ...]] = []
    stack: List[Tuple[Tuple[Hashable, ...], float]] = [((src,), 0.0)]
    while stack:
        path, used = stack.pop()
        node = path[-1]
        if node == dst:
            found.append(path)
            if len(found) > cap:
                raise PathExplosion(f"more than {cap} shortest paths between {tuple(p)} and {tuple(q)}")
            continue
        for nxt, data in h[node].items():
            if nxt in path or nxt not in to_dst:
                continue
            step = used + data["weight"]
            if step + to_dst[nxt] <= d + slack:
                stack.append((path + (nxt,), step))

    paths = []
    seen = set()
    for nodes in found:
        if nodes in seen:
            continue
        seen.add(nodes)
        pts = tuple(Point.of(_node_xy(dom, h, v)) for v in nodes)
        length = float(
            sum(np.hypot(*(xy(b) - xy(a))) for a, b in zip(pts[:-1], pts[1:]))
        )
        paths.append(GeodesicPath(pts, tuple(int(v) for v in nodes[1:-1]), length))
    paths.sort(key=lambda g: (g.length, g.vertex_ids))
    logger.debug("🔍 %d shortest paths of length %.12g", len(paths), d)
    return paths


def pivot_sets(dom: PolygonalDomain, graph: VisibilityGraph, s: PointLike, t: PointLike) -> PivotSets:
    paths = all_shortest_paths(dom, graph, s, t)
    couples = {(g.vertex_ids[0], g.vertex_ids[-1]) for g in paths if g.vertex_ids}
    return PivotSets(frozenset(couples))


def multi_path_vertex_pairs(dom: PolygonalDomain, graph: VisibilityGraph) -> List[Tuple[int, int]]:
    """Vertex pairs joined by more than one shortest path in the visibility graph"""
    n = dom.n
    weights = np.where(
        graph.adjacency,
        np.hypot(
            dom.vertices[:, None, 0] - dom.vertices[None, :, 0],
            dom.vertices[:, None, 1] - dom.vertices[None, :, 1],
        ),
        np.inf,
    )
    rel = get_settings().geodesic.rel_tol
    pairs = []
    for i in range(n):
        dist = graph.apsp[i]
        count = np.zeros(n, dtype=np.int64)
        count[i] = 1
        for b in np.argsort(dist, kind="stable").tolist():
            if b == i:
                continue
            slack = max(dom.eps, rel * dist[b])
            preds = np.nonzero(dist + weights[:, b] <= dist[b] + slack)[0]
            count[b] = count[preds].sum()
        pairs.extend((i, j) for j in range(i + 1, n) if count[j] > 1)
    return pairs


def path_count(pivots: PivotSets, direct: bool) -> int:
    """Number of tied shortest paths, one per couple under unique vertex-to-vertex paths"""
    return 1 if direct else len(pivots.couples)


def vertices_as_points(dom: PolygonalDomain, indices: Sequence[int]) -> List[Point]:
    return [dom.vertex(i) for i in indices]
