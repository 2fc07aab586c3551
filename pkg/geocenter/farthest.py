"""
🎯 FARTHEST POINTS
d_max(s) and the farthest-point set F(s), computed exactly by candidate
enumeration over the sites {(v, d(s, v))} ∪ {(s, 0)}:

- every polygon vertex
- per boundary edge, the points where two site cones f_i(t) = w_i + |p_i t|
  are equal (the breakpoints of the lower envelope, where its local maxima live)
- weighted equidistant points of site triples, kept when they are interior
  local maxima

Every surviving candidate is re-evaluated with the real geodesic distance,
so the envelope only proposes points and never decides values.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial import ConvexHull

from .config import get_settings
from .domain import LocationKind, PointLocation, PolygonalDomain, classify, in_interior
from .errors import DegenerateInput, NoConvergence, OutsideDomain
from .geodesic import PivotSets, SourceField, path_count, vertex_visibility
from .geom_core import Point, PointLike, cross, xy
from .visibility import VisibilityGraph, segments_visible

logger = logging.getLogger(__name__)

_MAX_PATHS = {LocationKind.VERTEX: 1, LocationKind.EDGE: 2, LocationKind.INTERIOR: 3}


@dataclass(frozen=True)
class FarthestPoint:
    point: Point
    location: PointLocation
    pivots: PivotSets
    value: float
    direct: bool = False
    degenerate: bool = False

    @property
    def path_count(self) -> int:
        return path_count(self.pivots, self.direct)

    def to_json(self) -> Dict[str, Any]:
        return {
            "point": [self.point.x, self.point.y],
            "location": self.location.to_json(),
            "value": self.value,
            "visible": self.direct,
            "degenerate": self.degenerate,
            "pivots": self.pivots.to_json(),
        }


@dataclass
class FarthestReport:
    source: Point
    dmax: float
    farthest: List[FarthestPoint]
    near: List[FarthestPoint] = field(default_factory=list)
    slack: float = 0.0

    @property
    def degenerate_flags(self) -> List[bool]:
        return [f.degenerate for f in self.farthest]

    @property
    def any_degenerate(self) -> bool:
        return any(self.degenerate_flags)

    def to_json(self) -> Dict[str, Any]:
        out = {
            "source": [self.source.x, self.source.y],
            "dmax": self.dmax,
            "farthest": [f.to_json() for f in self.farthest],
        }
        if self.slack > 0.0:
            out["near"] = [f.to_json() for f in self.near]
            out["slack"] = self.slack
        return out


def is_degenerate(location: PointLocation, count: int) -> bool:
    limit = _MAX_PATHS.get(location.kind)
    return limit is not None and count > limit


# --------------------------------------------------------------------------
# weighted equidistant points
# --------------------------------------------------------------------------


def apollonius(points: np.ndarray, weights: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized weighted equidistant points of site triples

    points has shape (k, 3, 2) and weights (k, 3). Returns solutions of shape
    (k, 2, 2) with a (k, 2) validity mask. A solution t satisfies
    w_1 + |p_1 t| = w_2 + |p_2 t| = w_3 + |p_3 t|. Collinear triples are
    reported as invalid.
    """
    p1 = points[:, 0, :]
    q2 = points[:, 1, :] - p1
    q3 = points[:, 2, :] - p1
    c2 = weights[:, 0] - weights[:, 1]
    c3 = weights[:, 0] - weights[:, 2]
    det = q2[:, 0] * q3[:, 1] - q2[:, 1] * q3[:, 0]
    scale2 = np.maximum(np.einsum("ij,ij->i", q2, q2), np.einsum("ij,ij->i", q3, q3))
    ok = np.abs(det) > 1e-12 * np.maximum(scale2, 1e-300)
    safe = np.where(ok, det, 1.0)

    g2 = (np.einsum("ij,ij->i", q2, q2) - c2 ** 2) / 2.0
    g3 = (np.einsum("ij,ij->i", q3, q3) - c3 ** 2) / 2.0
    # t' = M^-1 (g + h r) with rows of M the vectors q2, q3 and h = -c
    t0 = np.stack([(q3[:, 1] * g2 - q2[:, 1] * g3), (-q3[:, 0] * g2 + q2[:, 0] * g3)], axis=1) / safe[:, None]
    t1 = np.stack([(q3[:, 1] * -c2 - q2[:, 1] * -c3), (-q3[:, 0] * -c2 + q2[:, 0] * -c3)], axis=1) / safe[:, None]

    qa = np.einsum("ij,ij->i", t1, t1) - 1.0
    qb = 2.0 * np.einsum("ij,ij->i", t0, t1)
    qc = np.einsum("ij,ij->i", t0, t0)
    roots = np.full((len(points), 2), np.nan)
    linear = np.abs(qa) < 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        lin_r = np.where(np.abs(qb) > 0.0, -qc / qb, np.nan)
        disc = qb ** 2 - 4.0 * qa * qc
        disc = np.where((disc < 0.0) & (disc > -1e-12 * np.maximum(qb ** 2, 1.0)), 0.0, disc)
        sq = np.sqrt(disc)
        r_plus = (-qb + sq) / (2.0 * qa)
        r_minus = (-qb - sq) / (2.0 * qa)
    roots[:, 0] = np.where(linear, lin_r, r_plus)
    roots[:, 1] = np.where(linear, np.nan, r_minus)

    sols = p1[:, None, :] + t0[:, None, :] + t1[:, None, :] * roots[:, :, None]
    valid = ok[:, None] & np.isfinite(roots) & (roots >= 0.0)
    valid &= (roots + c2[:, None] >= 0.0) & (roots + c3[:, None] >= 0.0)
    # the double root of a tangent pair shows up twice
    same = np.all(np.abs(sols[:, 0] - sols[:, 1]) <= 1e-12 * np.sqrt(scale2)[:, None], axis=1)
    valid[:, 1] &= ~same
    return np.nan_to_num(sols), valid


def _equidistance_residual(sites: np.ndarray, weights: np.ndarray):
    def residual(t: np.ndarray) -> np.ndarray:
        f = weights + np.hypot(sites[:, 0] - t[0], sites[:, 1] - t[1])
        return np.array([f[0] - f[1], f[0] - f[2]])

    return residual


def weighted_equidistant(sites: Sequence[Tuple[PointLike, float]]) -> List[Point]:
    """All points with w_1 + |v_1 t| = w_2 + |v_2 t| = w_3 + |v_3 t|

    Algebraic solve first; collinear sites fall back to least-squares Newton
    from the centroid and eight perturbations around it.
    """
    if len(sites) != 3:
        raise DegenerateInput("weighted_equidistant takes exactly three sites")
    pts = np.array([xy(p) for p, _ in sites])
    ws = np.array([float(w) for _, w in sites])
    spread = float(np.ptp(pts, axis=0).max())
    for i, j in itertools.combinations(range(3), 2):
        if np.hypot(*(pts[i] - pts[j])) <= 1e-12 * max(1.0, spread):
            raise DegenerateInput("weighted_equidistant needs distinct sites")
    residual = _equidistance_residual(pts, ws)
    scale = max(1.0, spread, float(np.abs(ws).max()))

    sols, valid = apollonius(pts[None, :, :], ws[None, :])
    found = [sols[0, k] for k in range(2) if valid[0, k]]
    if not found:
        centroid = pts.mean(axis=0)
        n_seeds = get_settings().candidates.newton_seeds
        seeds = [centroid] + [
            centroid + spread * np.array([math.cos(a), math.sin(a)])
            for a in np.linspace(0.0, 2.0 * math.pi, n_seeds, endpoint=False)
        ]
        for seed in seeds:
            res = least_squares(residual, seed, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
            if np.max(np.abs(res.fun)) < 1e-10 * scale:
                found.append(res.x)
        if not found:
            err = NoConvergence("no seed converged for the equidistance system")
            logger.debug("⚠️ %s (sites %s)", err, pts.tolist())
            return []

    out: List[Point] = []
    for t in found:
        if np.max(np.abs(residual(t))) > 1e-10 * scale:
            continue
        if any(np.hypot(t[0] - q.x, t[1] - q.y) <= 1e-9 * scale for q in out):
            continue
        out.append(Point(float(t[0]), float(t[1])))
    return out


# --------------------------------------------------------------------------
# pairwise equality along a segment
# --------------------------------------------------------------------------


def pair_roots_on_segment(
    a: np.ndarray, b: np.ndarray, sites: np.ndarray, weights: np.ndarray, margin: float = 0.0
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Parameters λ in (margin, 1 - margin) where two site cones are equal on segment ab

    Returns (lambdas, i, j) for every root of w_i + |p_i t| = w_j + |p_j t|
    with t = a + λ (b - a), over all site pairs i < j.
    """
    m = len(sites)
    if m < 2:
        empty = np.array([], dtype=float)
        return empty, empty.astype(int), empty.astype(int)
    d = b - a
    l2 = float(np.dot(d, d))
    rel = sites - a
    bb = -2.0 * rel @ d
    cc = np.einsum("ij,ij->i", rel, rel)
    ii, jj = np.triu_indices(m, 1)
    c = weights[jj] - weights[ii]
    bd = bb[ii] - bb[jj]
    k = cc[ii] - cc[jj] - c ** 2
    qa = bd ** 2 - 4.0 * c ** 2 * l2
    qb = 2.0 * bd * k - 4.0 * c ** 2 * bb[jj]
    qc = k ** 2 - 4.0 * c ** 2 * cc[jj]

    lam = np.full((len(ii), 2), np.nan)
    tiny = 1e-14 * np.maximum(np.abs(qb), np.maximum(np.abs(qc), 1e-300))
    linear = np.abs(qa) <= tiny
    with np.errstate(divide="ignore", invalid="ignore"):
        lam_lin = np.where(np.abs(qb) > 0.0, -qc / qb, np.nan)
        disc = qb ** 2 - 4.0 * qa * qc
        disc = np.where((disc < 0.0) & (disc > -1e-10 * np.maximum(qb ** 2, 1e-300)), 0.0, disc)
        sq = np.sqrt(disc)
        lam[:, 0] = np.where(linear, lam_lin, (-qb + sq) / (2.0 * qa))
        lam[:, 1] = np.where(linear, np.nan, (-qb - sq) / (2.0 * qa))

    lam_flat = lam.ravel()
    i_flat = np.repeat(ii, 2)
    j_flat = np.repeat(jj, 2)
    keep = np.isfinite(lam_flat) & (lam_flat > margin) & (lam_flat < 1.0 - margin)
    lam_flat, i_flat, j_flat = lam_flat[keep], i_flat[keep], j_flat[keep]
    if not len(lam_flat):
        return lam_flat, i_flat, j_flat

    # polish on the unsquared equation and drop the spurious branch
    for _ in range(3):
        qi = l2 * lam_flat ** 2 + bb[i_flat] * lam_flat + cc[i_flat]
        qj = l2 * lam_flat ** 2 + bb[j_flat] * lam_flat + cc[j_flat]
        ri, rj = np.sqrt(np.maximum(qi, 1e-300)), np.sqrt(np.maximum(qj, 1e-300))
        h = weights[i_flat] + ri - weights[j_flat] - rj
        dh = (2.0 * l2 * lam_flat + bb[i_flat]) / (2.0 * ri) - (2.0 * l2 * lam_flat + bb[j_flat]) / (2.0 * rj)
        step = np.where(np.abs(dh) > 1e-12, h / np.where(np.abs(dh) > 1e-12, dh, 1.0), 0.0)
        lam_flat = np.clip(lam_flat - step, margin, 1.0 - margin)
    qi = l2 * lam_flat ** 2 + bb[i_flat] * lam_flat + cc[i_flat]
    qj = l2 * lam_flat ** 2 + bb[j_flat] * lam_flat + cc[j_flat]
    h = weights[i_flat] + np.sqrt(np.maximum(qi, 0.0)) - weights[j_flat] - np.sqrt(np.maximum(qj, 0.0))
    scale = max(1.0, math.sqrt(l2), float(np.abs(weights).max()))
    good = (np.abs(h) <= 1e-7 * scale) & (lam_flat > margin) & (lam_flat < 1.0 - margin)
    return lam_flat[good], i_flat[good], j_flat[good]


# --------------------------------------------------------------------------
# Pivot placement at farthest points
# --------------------------------------------------------------------------


def obs10_check(dom: PolygonalDomain, t: PointLike, location: PointLocation, pivots: PivotSets) -> bool:
    """Pivot placement every farthest point must satisfy for its location class"""
    q = xy(t)
    eps = dom.eps
    pts = dom.vertices[sorted(pivots.t_pivots)] if pivots.couples else np.zeros((0, 2))
    if location.kind is LocationKind.VERTEX:
        return True
    if location.kind is LocationKind.INTERIOR:
        if len(pts) < 3:
            return False
        rel = pts - pts[0]
        if np.max(np.abs(cross(rel[1:, None, :], rel[None, 1:, :]))) <= eps * max(1.0, dom.diameter):
            return False
        try:
            hull = ConvexHull(pts)
        except (ValueError, RuntimeError):
            return False
        offsets = hull.equations[:, :2] @ q + hull.equations[:, 2]
        return bool(np.all(offsets < -eps))
    if location.kind is LocationKind.EDGE:
        if len(pts) < 2:
            return False
        d = dom.edge_direction(location.index)
        normal = np.array([-d[1], d[0]])
        rel = pts - q
        inward = rel @ normal
        along = rel @ d
        return bool(np.any(inward > eps) and np.any(along > eps) and np.any(along < -eps))
    return False


# --------------------------------------------------------------------------
# d_max and F(s)
# --------------------------------------------------------------------------


@dataclass
class _Candidate:
    point: np.ndarray
    kind: str
    value: float = -math.inf


def _sites(field: SourceField) -> Tuple[np.ndarray, np.ndarray]:
    finite = np.isfinite(field.to_vertex)
    pts = field.dom.vertices[finite]
    ws = field.to_vertex[finite]
    if field.vertex is None:
        pts = np.vstack([pts, field.point[None, :]])
        ws = np.append(ws, 0.0)
    return pts, ws


def _local_max_interior(field: SourceField, t: np.ndarray, value: float, radius: float, samples: int) -> bool:
    ang = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    ring = t + radius * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    inside = in_interior(field.dom, ring, margin=0.0)
    if not np.any(inside):
        return True
    d, _ = field.distances(ring[inside])
    return bool(np.all(d <= value + 1e-12 * max(1.0, value)))


def _local_max_edge(field: SourceField, t: np.ndarray, e: int, value: float, radius: float) -> bool:
    d = field.dom.edge_direction(e)
    probes = np.stack([t + radius * d, t - radius * d])
    vals, _ = field.distances(probes)
    return bool(np.all(vals <= value + 1e-12 * max(1.0, value)))


def dmax_and_farthest(
    dom: PolygonalDomain,
    graph: VisibilityGraph,
    s: PointLike,
    slack: float = 0.0,
    field: Optional[SourceField] = None,
) -> FarthestReport:
    """Exact d_max(s) and F(s); slack > 0 also collects the near-farthest local maxima"""
    p = xy(s)
    if classify(dom, p).kind is LocationKind.OUTSIDE:
        raise OutsideDomain(f"point {tuple(p)} is outside the domain")
    settings = get_settings()
    field = field or SourceField.build(dom, graph, p)
    sites, weights = _sites(field)
    eps = dom.eps

    # (a) vertices
    vertex_vals = field.to_vertex.copy()
    lb = float(np.max(vertex_vals[np.isfinite(vertex_vals)])) if dom.n else 0.0
    cut = lambda: lb - slack - 10.0 * eps  # noqa: E731
    accepted: List[_Candidate] = [
        _Candidate(dom.vertices[k].copy(), "vertex", float(vertex_vals[k]))
        for k in range(dom.n)
        if vertex_vals[k] >= cut()
    ]

    local_radius = settings.farthest.local_max_radius * max(1.0, lb)

    # (b) edge breakpoints
    for e in range(len(dom.edges)):
        a, b = dom.edge_a[e], dom.edge_b[e]
        d = b - a
        length = float(np.hypot(*d))
        on_side = cross(d[None, :], sites - a) >= -eps * length
        if np.count_nonzero(on_side) < 2:
            continue
        s_pts, s_w = sites[on_side], weights[on_side]
        lam, ii, jj = pair_roots_on_segment(a, b, s_pts, s_w, margin=eps / length)
        if not len(lam):
            continue
        t_pts = a + lam[:, None] * d
        upper = s_w[ii] + np.hypot(*(t_pts - s_pts[ii]).T)
        keep = upper >= cut()
        if not np.any(keep):
            continue
        t_pts, upper, ii, jj = t_pts[keep], upper[keep], ii[keep], jj[keep]
        both = segments_visible(dom, t_pts, s_pts[ii]) & segments_visible(dom, t_pts, s_pts[jj])
        if not np.any(both):
            continue
        t_pts, upper = t_pts[both], upper[both]
        real, _ = field.distances(t_pts)
        match = np.abs(real - upper) <= 1e-7 * max(1.0, lb)
        for t, val in zip(t_pts[match], real[match]):
            if val < cut():
                continue
            if _local_max_edge(field, t, e, float(val), local_radius):
                accepted.append(_Candidate(t, "edge", float(val)))
                lb = max(lb, float(val))

    # (c) interior triples
    m = len(sites)
    if m >= 3:
        tri = np.array(list(itertools.combinations(range(m), 3)), dtype=int)
        sols, valid = apollonius(sites[tri], weights[tri])
        vals = weights[tri[:, 0]][:, None] + np.hypot(
            sols[..., 0] - sites[tri[:, 0]][:, None, 0], sols[..., 1] - sites[tri[:, 0]][:, None, 1]
        )
        valid &= vals >= cut()
        cand = sols[valid]
        owners = np.broadcast_to(np.arange(len(tri))[:, None], valid.shape)[valid]
        if len(cand):
            upper = vals[valid]
            inside = in_interior(dom, cand)
            cand, upper, owners = cand[inside], upper[inside], owners[inside]
        if len(cand):
            seen = np.ones(len(cand), dtype=bool)
            for k in range(3):
                seen &= segments_visible(dom, cand, sites[tri[owners, k]])
            cand, upper = cand[seen], upper[seen]
        if len(cand):
            real, _ = field.distances(cand)
            match = np.abs(real - upper) <= 1e-7 * max(1.0, lb)
            for t, val in zip(cand[match], real[match]):
                if val < cut():
                    continue
                if _local_max_interior(field, t, float(val), local_radius, settings.farthest.local_max_samples):
                    accepted.append(_Candidate(t, "interior", float(val)))
                    lb = max(lb, float(val))

    dmax = max(c.value for c in accepted) if accepted else 0.0
    tol = max(eps, settings.tolerances.eps_len * dmax)
    chosen = [c for c in accepted if c.value >= dmax - max(slack, tol)]
    chosen.sort(key=lambda c: -c.value)

    points: List[FarthestPoint] = []
    for c in chosen:
        if any(np.hypot(*(c.point - xy(fp.point))) <= 1e3 * eps for fp in points):
            continue
        loc = classify(dom, c.point)
        vis_t = vertex_visibility(dom, c.point)[0]
        _, pivots, direct = field.couples(c.point, vis_t)
        if not direct and c.kind != "vertex" and not obs10_check(dom, c.point, loc, pivots):
            logger.debug("⚠️ Dropped %s candidate %s failing the pivot check", c.kind, c.point)
            continue
        count = path_count(pivots, direct)
        points.append(
            FarthestPoint(
                point=Point.of(c.point),
                location=loc,
                pivots=pivots,
                value=c.value,
                direct=direct,
                degenerate=is_degenerate(loc, count),
            )
        )

    dmax = max((fp.value for fp in points), default=dmax)
    tol = max(eps, settings.tolerances.eps_len * dmax)
    farthest = [fp for fp in points if fp.value >= dmax - tol]
    near = [fp for fp in points if fp.value >= dmax - slack] if slack > 0.0 else list(farthest)
    logger.debug("🎯 dmax=%.12g with %d farthest points (%d near)", dmax, len(farthest), len(near))
    return FarthestReport(Point.of(p), dmax, farthest, near, slack)


def vertex_lower_bound(field: SourceField) -> float:
    """max over polygon vertices of d(s, v), a cheap lower bound of d_max(s)"""
    finite = field.to_vertex[np.isfinite(field.to_vertex)]
    return float(finite.max()) if len(finite) else 0.0
