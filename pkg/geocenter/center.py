"""
🏁 GEODESIC CENTER
Gathers candidates from every generator, evaluates d_max exactly on the
survivors and returns the argmin set. Also hosts the independent grid oracle
and a descent polish used to seed and cross-check the exact search.

Usage:
    result = solve(dom, graph, SolveOptions(force=True))
    result.radius, result.centers
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .candidates import (
    REFINED,
    CandidateContext,
    CandidatePoint,
    build_context,
    dedupe,
    degenerate_candidates,
    general_candidates,
    special_candidates,
)
from .config import Settings, get_settings
from .domain import LocationKind, PolygonalDomain, classify, free_direction_range, in_domain
from .errors import DegenerateFarthest, NoProgress, NotApplicable, NotCanonical, OutsideDomain
from .farthest import FarthestReport, dmax_and_farthest, vertex_lower_bound
from .geodesic import SourceField, vertex_visibility
from .geom_core import Point, PointLike, range_intersect, unit, xy
from .pirange import farthest_range, necessary_condition

logger = logging.getLogger(__name__)


@dataclass
class SolveOptions:
    force: bool = False
    threads: Optional[int] = None
    refine_seeds: Optional[int] = None
    use_special: bool = True
    use_general: bool = True
    use_degenerate: bool = True


@dataclass
class CenterResult:
    centers: List[Point]
    radius: float
    per_center: List[FarthestReport]
    provenance: List[str]
    verdicts: List[Optional[bool]] = field(default_factory=list)
    evaluated: int = 0
    candidates: int = 0

    def to_json(self) -> Dict[str, Any]:
        return {
            "radius": self.radius,
            "centers": [[c.x, c.y] for c in self.centers],
            "provenance": list(self.provenance),
            "necessary_condition": [
                "degenerate" if v is None else ("empty" if v else "non-empty") for v in self.verdicts
            ],
            "farthest": [r.to_json() for r in self.per_center],
            "candidates": self.candidates,
            "evaluated": self.evaluated,
        }


@dataclass(frozen=True)
class OracleResult:
    point: Point
    value: float
    bound: float

    def to_json(self) -> Dict[str, Any]:
        return {"point": [self.point.x, self.point.y], "value": self.value, "bound": self.bound}


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------


def grid_points(dom: PolygonalDomain, h: float) -> np.ndarray:
    """Points of the h-lattice anchored at the bbox corner that lie in the domain"""
    x0, y0, x1, y1 = dom.bbox
    xs = np.arange(x0, x1 + 0.5 * h, h)
    ys = np.arange(y0, y1 + 0.5 * h, h)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    return pts[in_domain(dom, pts)]


def boundary_samples(dom: PolygonalDomain, h: float) -> np.ndarray:
    """Vertices plus points every h along each edge"""
    out = [dom.vertices]
    for e in range(len(dom.edges)):
        a, b = dom.edge_a[e], dom.edge_b[e]
        k = max(1, int(math.ceil(np.hypot(*(b - a)) / h)))
        lam = np.arange(1, k) / k
        if len(lam):
            out.append(a + lam[:, None] * (b - a))
    return np.vstack(out)


def oracle_samples(dom: PolygonalDomain, h: float) -> np.ndarray:
    return np.vstack([grid_points(dom, h), boundary_samples(dom, h)])


def sampled_dmax(
    dom: PolygonalDomain, graph, sources: np.ndarray, samples: np.ndarray, sample_vis: np.ndarray
) -> np.ndarray:
    """max over samples of d(s, sample) for each source"""
    out = np.empty(len(sources))
    for i, s in enumerate(sources):
        field_s = SourceField.build(dom, graph, s)
        d, _ = field_s.distances(samples, sample_vis)
        out[i] = float(np.max(d))
    return out


def grid_dmax(dom: PolygonalDomain, graph, s: PointLike, h: float) -> float:
    """Sampled lower bound on d_max(s); the true value is at most h above it"""
    samples = oracle_samples(dom, h)
    vis = vertex_visibility(dom, samples)
    return float(sampled_dmax(dom, graph, xy(s)[None, :], samples, vis)[0])


def brute_force_center(dom: PolygonalDomain, graph, h: float, threads: Optional[int] = None) -> OracleResult:
    """Grid argmin of an upper bound of d_max; the radius lies in [value - bound, value]"""
    if h <= 0.0:
        raise ValueError("grid spacing must be positive")
    threads = threads or get_settings().center.threads
    sources = grid_points(dom, h)
    if not len(sources):
        sources = dom.vertices.copy()
    samples = oracle_samples(dom, h)
    vis = vertex_visibility(dom, samples)
    logger.info("🔍 Grid oracle: %d sources x %d samples (h=%.4g)", len(sources), len(samples), h)

    rows = np.array_split(np.arange(len(sources)), max(1, min(len(sources), 4 * threads)))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda idx: sampled_dmax(dom, graph, sources[idx], samples, vis), rows))
    else:
        parts = [sampled_dmax(dom, graph, sources[idx], samples, vis) for idx in rows]
    lower = np.concatenate(parts)
    upper = lower + h
    best = int(np.argmin(upper))
    return OracleResult(Point.of(sources[best]), float(upper[best]), 2.0 * h)


# --------------------------------------------------------------------------
# descent polish
# --------------------------------------------------------------------------


def _exact_range(dom: PolygonalDomain, s: np.ndarray, points) -> Optional[Any]:
    """R(s) restricted to the given farthest points, None when a point is degenerate"""
    ranges = [free_direction_range(dom, s)]
    for fp in points:
        if fp.degenerate:
            return None
        try:
            ranges.append(farthest_range(dom, s, fp))
        except (DegenerateFarthest, NotCanonical):
            return None
    return range_intersect(ranges, get_settings().tolerances.eps_ang)


def _pattern_step(
    dom: PolygonalDomain, graph, s: np.ndarray, value: float, step: float, n_dirs: int = 36
) -> Optional[Tuple[np.ndarray, float]]:
    best = None
    for r in np.linspace(0.0, 2.0 * math.pi, n_dirs, endpoint=False):
        p = s + step * unit(float(r))
        if not in_domain(dom, p[None, :])[0]:
            continue
        v = dmax_and_farthest(dom, graph, p).dmax
        if v < value and (best is None or v < best[1]):
            best = (p, v)
    return best


def local_refine(
    dom: PolygonalDomain, graph, s0: PointLike, max_iter: Optional[int] = None, step: Optional[float] = None
) -> Point:
    """Descend along the midpoint of R(s) with a halving step

    Returns as soon as R(s) is empty or the step drops below eps_len. Raises
    NoProgress (carrying the last point) after max_iter rounds.
    """
    settings = get_settings()
    max_iter = settings.center.refine_max_iter if max_iter is None else max_iter
    s = xy(s0).copy()
    if classify(dom, s).kind is LocationKind.OUTSIDE:
        raise OutsideDomain(f"refine start {tuple(s)} is outside the domain")
    eps_ang = settings.tolerances.eps_ang
    step = 0.05 * dom.diameter if step is None else step
    report = dmax_and_farthest(dom, graph, s)
    value = report.dmax

    for it in range(max_iter):
        exact = _exact_range(dom, s, report.farthest)
        if exact is not None and exact.is_empty(eps_ang):
            logger.debug("✅ Refine stopped with empty R(s) after %d rounds", it)
            return Point.of(s)
        if step < dom.eps:
            return Point.of(s)

        if exact is None:
            moved = _pattern_step(dom, graph, s, value, step)
            if moved is None:
                step /= 2.0
                continue
            s, value = moved
            report = dmax_and_farthest(dom, graph, s)
            continue

        # near-farthest points keep the direction from zigzagging between branches
        near = dmax_and_farthest(dom, graph, s, slack=step).near
        wide = _exact_range(dom, s, near)
        direction = exact.midpoint_direction()
        if wide is not None and not wide.is_empty(eps_ang):
            direction = wide.midpoint_direction()

        while step >= dom.eps:
            p = s + step * unit(direction)
            if in_domain(dom, p[None, :])[0]:
                trial = dmax_and_farthest(dom, graph, p)
                if trial.dmax < value:
                    s, value, report = p, trial.dmax, trial
                    break
            step /= 2.0
    raise NoProgress(f"no convergence within {max_iter} refine rounds", point=Point.of(s))


def corollary10_check(
    dom: PolygonalDomain, graph, s: PointLike, n_dirs: int = 36, h: float = 1e-4
) -> float:
    """Largest relative drop of d_max over steps of length h along free directions"""
    p = xy(s)
    base = dmax_and_farthest(dom, graph, p).dmax
    free = free_direction_range(dom, p)
    worst = -math.inf
    for r in np.linspace(0.0, 2.0 * math.pi, n_dirs, endpoint=False):
        if not free.contains(float(r)):
            continue
        q = p + h * unit(float(r))
        if not in_domain(dom, q[None, :])[0]:
            continue
        d = dmax_and_farthest(dom, graph, q).dmax
        worst = max(worst, (base - d) / max(base, 1e-300))
    return worst


# --------------------------------------------------------------------------
# solve
# --------------------------------------------------------------------------


def _gather(
    dom: PolygonalDomain, graph, ctx: CandidateContext, options: SolveOptions, settings: Settings
) -> List[CandidatePoint]:
    cands: List[CandidatePoint] = []
    if options.use_special:
        cands.extend(special_candidates(dom, graph, context=ctx, force=options.force, settings=settings))
    if options.use_general:
        cands.extend(general_candidates(dom, graph, context=ctx, force=options.force, settings=settings))
    if options.use_degenerate:
        cands.extend(degenerate_candidates(dom, graph, context=ctx, force=options.force, settings=settings))
    else:
        cands.extend(CandidatePoint(dom.vertex(k), "vertex") for k in range(dom.n))

    k = settings.center.refine_seeds if options.refine_seeds is None else options.refine_seeds
    ranked = sorted(ctx.observations, key=lambda o: o.dmax)[:k]
    for obs in ranked:
        try:
            p = local_refine(dom, graph, obs.seed)
        except NoProgress as e:
            logger.warning("⚠️ Refine from %s stalled", tuple(obs.seed))
            p = e.point
        if p is not None:
            cands.append(CandidatePoint(p, REFINED))
    return cands


def _lower_bounds(dom: PolygonalDomain, graph, points: np.ndarray, probes: np.ndarray, probe_vis: np.ndarray) -> np.ndarray:
    out = np.empty(len(points))
    for i, s in enumerate(points):
        field_s = SourceField.build(dom, graph, s)
        d, _ = field_s.distances(probes, probe_vis)
        out[i] = max(vertex_lower_bound(field_s), float(np.max(d)) if len(d) else 0.0)
    return out


def solve(dom: PolygonalDomain, graph, options: Optional[SolveOptions] = None) -> CenterResult:
    """Exact evaluation of every deduplicated candidate, lowest lower bound first"""
    options = options or SolveOptions()
    settings = get_settings()
    threads = options.threads or settings.center.threads
    ctx = build_context(dom, graph, settings)
    cands = [c for c in _gather(dom, graph, ctx, options, settings) if classify(dom, c.point).kind is not LocationKind.OUTSIDE]
    cands = dedupe(cands, dom.eps)
    logger.info("🔍 Evaluating %d candidates", len(cands))

    pts = np.array([[c.point.x, c.point.y] for c in cands])
    probes = boundary_samples(dom, dom.diameter / 16.0)
    probe_vis = vertex_visibility(dom, probes)
    lbs = _lower_bounds(dom, graph, pts, probes, probe_vis)
    order = np.argsort(lbs, kind="stable")

    values: Dict[int, FarthestReport] = {}
    best = math.inf
    batch = max(1, threads)
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for lo in range(0, len(order), batch):
            idx = [int(i) for i in order[lo:lo + batch]]
            tol = max(dom.eps, settings.center.argmin_rel_tol * best) if math.isfinite(best) else 0.0
            idx = [i for i in idx if lbs[i] <= best + tol]
            if not idx:
                break
            if pool is not None:
                reports = list(pool.map(lambda i: dmax_and_farthest(dom, graph, pts[i]), idx))
            else:
                reports = [dmax_and_farthest(dom, graph, pts[i]) for i in idx]
            for i, rep in zip(idx, reports):
                values[i] = rep
                best = min(best, rep.dmax)
    finally:
        if pool is not None:
            pool.shutdown()

    radius = best
    tol = max(dom.eps, settings.center.argmin_rel_tol * radius)
    winners = sorted((i for i, r in values.items() if r.dmax <= radius + tol), key=lambda i: (cands[i].case_tag == REFINED, values[i].dmax, i))

    # a polished point next to an exact candidate is the same center
    merge = 1e-6 * max(1.0, dom.diameter)
    kept: List[int] = []
    for i in winners:
        if any(np.hypot(*(pts[i] - pts[j])) <= merge for j in kept):
            continue
        kept.append(i)
    kept.sort(key=lambda i: (round(pts[i][0], 9), round(pts[i][1], 9)))

    verdicts: List[Optional[bool]] = []
    for i in kept:
        try:
            empty, _ = necessary_condition(dom, graph, pts[i])
            verdicts.append(empty)
        except (NotApplicable, DegenerateFarthest, NotCanonical):
            verdicts.append(None)

    logger.info("🎯 Radius %.12g with %d center(s), %d evaluated", radius, len(kept), len(values))
    return CenterResult(
        centers=[cands[i].point for i in kept],
        radius=float(radius),
        per_center=[values[i] for i in kept],
        provenance=[cands[i].case_tag for i in kept],
        verdicts=verdicts,
        evaluated=len(values),
        candidates=len(cands),
    )
