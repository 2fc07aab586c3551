"""
👁️ VISIBILITY
Strict visibility predicate and the vertex visibility graph.

p sees q when the closed segment pq lies in the domain and no polygon vertex
sits in its open interior. A segment that grazes a vertex is blocked. All
segment tests are vectorized over targets and boundary edges with numpy.
"""

import logging
from dataclasses import dataclass
from typing import List

import networkx as nx
import numpy as np

from .domain import LocationKind, PolygonalDomain, classify, in_domain
from .errors import OutsideDomain
from .geom_core import PointLike, cross, xy

logger = logging.getLogger(__name__)


def _sign(x: np.ndarray, eps: float) -> np.ndarray:
    return np.where(x > eps, 1, np.where(x < -eps, -1, 0))


def segments_visible(dom: PolygonalDomain, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Strict visibility for a batch of segments starts[k] -> ends[k]

    Every endpoint is assumed to lie in the domain.
    """
    p = np.atleast_2d(np.asarray(starts, dtype=float))
    q = np.atleast_2d(np.asarray(ends, dtype=float))
    p = np.broadcast_to(p, q.shape) if len(p) == 1 else p
    eps = dom.eps
    d = q - p
    length = np.hypot(d[:, 0], d[:, 1])
    short = length <= eps
    safe_len = np.where(short, 1.0, length)

    # vertex in the open segment
    w = dom.vertices[None, :, :] - p[:, None, :]
    along = np.einsum("mk,mnk->mn", d, w) / safe_len[:, None]
    perp = np.abs(cross(d[:, None, :], w)) / safe_len[:, None]
    on_open = (perp <= eps) & (along > eps) & (along < length[:, None] - eps)
    blocked = on_open.any(axis=1)

    # proper crossing with a boundary edge
    a, b = dom.edge_a, dom.edge_b
    ab = b - a
    ab_len = np.hypot(ab[:, 0], ab[:, 1])
    s1 = _sign(cross(d[:, None, :], a[None, :, :] - p[:, None, :]) / safe_len[:, None], eps)
    s2 = _sign(cross(d[:, None, :], b[None, :, :] - p[:, None, :]) / safe_len[:, None], eps)
    s3 = _sign(cross(ab[None, :, :], p[:, None, :] - a[None, :, :]) / ab_len[None, :], eps)
    s4 = _sign(cross(ab[None, :, :], q[:, None, :] - a[None, :, :]) / ab_len[None, :], eps)
    crossing = ((s1 * s2) < 0) & ((s3 * s4) < 0)
    blocked |= crossing.any(axis=1)

    # a segment that neither crosses nor touches a vertex is in or out as a whole
    candidates = ~blocked & ~short
    if np.any(candidates):
        mids = p[candidates] + d[candidates] / 2.0
        ok = in_domain(dom, mids)
        idx = np.nonzero(candidates)[0]
        blocked[idx[~ok]] = True
    return ~blocked


def visible_mask(dom: PolygonalDomain, p: PointLike, targets: np.ndarray) -> np.ndarray:
    """Boolean mask: which rows of targets are visible from p"""
    q = np.atleast_2d(np.asarray(targets, dtype=float))
    return segments_visible(dom, xy(p)[None, :], q)


def _require_inside(dom: PolygonalDomain, p: PointLike) -> None:
    if classify(dom, p).kind is LocationKind.OUTSIDE:
        raise OutsideDomain(f"point {tuple(xy(p))} is outside the domain")


def visible(dom: PolygonalDomain, p: PointLike, q: PointLike) -> bool:
    _require_inside(dom, p)
    _require_inside(dom, q)
    return bool(visible_mask(dom, p, xy(q)[None, :])[0])


@dataclass(eq=False)
class VisibilityGraph:
    """Visibility graph over polygon vertices

    graph holds the weighted networkx graph; adjacency and apsp are dense
    numpy views used by the vectorized distance fields.
    """

    dom: PolygonalDomain
    graph: nx.Graph
    adjacency: np.ndarray
    apsp: np.ndarray

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()


def build_visibility_graph(dom: PolygonalDomain) -> VisibilityGraph:
    n = dom.n
    adjacency = np.zeros((n, n), dtype=bool)
    for i in range(n - 1):
        mask = visible_mask(dom, dom.vertices[i], dom.vertices[i + 1:])
        adjacency[i, i + 1:] = mask
    adjacency |= adjacency.T

    g = nx.Graph()
    g.add_nodes_from(range(n))
    ii, jj = np.nonzero(np.triu(adjacency))
    for i, j in zip(ii.tolist(), jj.tolist()):
        w = float(np.hypot(*(dom.vertices[i] - dom.vertices[j])))
        g.add_edge(i, j, weight=w)

    apsp = np.full((n, n), np.inf)
    for src, lengths in nx.all_pairs_dijkstra_path_length(g, weight="weight"):
        for dst, value in lengths.items():
            apsp[src, dst] = value
    logger.info("✅ Visibility graph: %d vertices, %d edges", n, g.number_of_edges())
    return VisibilityGraph(dom=dom, graph=g, adjacency=adjacency, apsp=apsp)


def visible_vertices(dom: PolygonalDomain, graph: VisibilityGraph, p: PointLike) -> List[int]:
    _require_inside(dom, p)
    mask = visible_mask(dom, p, dom.vertices)
    # a point at a vertex does not list itself
    mask &= np.hypot(*(dom.vertices - xy(p)).T) > dom.eps
    return np.nonzero(mask)[0].tolist()
