"""
🔍 CANDIDATE CENTERS
Exhaustive candidate generation for geodesic centers.

Farthest points are described by combinatorial templates (a vertex reached
through a root u, an edge point with two couples, an interior point with
three couples). A coarse grid of trial sources harvests the templates that
actually occur together as near-farthest points. Co-observed templates become
small equation systems:

- path-length equalities inside each target and across targets
- on-edge membership of the source (source on an edge)
- overlapping bounding lines of two π-ranges, or a bounding line that
  contains the source's edge
- the special identities (α = ±π with β₁ + β₂ = π, or a_i = b_i)

Systems are solved with scipy least_squares, all-vertex cases use closed
forms, and every solution runs through validate_quadruple before it is emitted.

Usage:
    ctx = build_context(dom, graph)
    cands = general_candidates(dom, graph, context=ctx, force=True)
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial import cKDTree

from .config import Settings, get_settings
from .domain import (
    GeneralPositionReport,
    LocationKind,
    PointLocation,
    PolygonalDomain,
    check_general_position,
    classify,
    free_direction_range,
    in_domain,
    in_interior,
)
from .errors import CombinatorialBudgetExceeded, GeneralPositionViolated, GeocenterError
from .farthest import (
    FarthestPoint,
    apollonius,
    dmax_and_farthest,
    obs10_check,
    pair_roots_on_segment,
)
from .geodesic import PivotSets, SourceField
from .geom_core import (
    DirectionRange,
    Point,
    PointLike,
    angle_of,
    cross,
    range_intersect,
    wrap_pi,
    xy,
)
from .pirange import (
    canonicalize_interior,
    edge_angles,
    interior_gaps,
    pirange_for,
)
from .visibility import VisibilityGraph, segments_visible

logger = logging.getLogger(__name__)

VERTEX = "vertex"
SPECIAL_E = "special-E"
SPECIAL_I = "special-I"
REFINED = "refined"
DEGENERATE_VERTEX = "D-vertex-t"
DEGENERATE_CROSSING = "D-crossing-t"
DEGENERATE_EDGE = "D-sE"

_KIND_SLOT = {LocationKind.INTERIOR: 0, LocationKind.EDGE: 1, LocationKind.VERTEX: 2}


def general_tag(kinds: Iterable[LocationKind], source_on_edge: bool) -> str:
    """Case tag G-(x,y,z): targets in the interior, on edges, at vertices"""
    counts = [0, 0, 0]
    for k in kinds:
        counts[_KIND_SLOT[k]] += 1
    prefix = "G-sE-" if source_on_edge else "G-"
    return f"{prefix}({counts[0]},{counts[1]},{counts[2]})"


# --------------------------------------------------------------------------
# data types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Target:
    """Combinatorial template of a farthest point

    couples are (u, v) vertex pairs; for a vertex target k the single couple
    is (u, k) with u the root seen from the source.
    """

    kind: LocationKind
    couples: Tuple[Tuple[int, int], ...]
    index: Optional[int] = None

    @property
    def unknowns(self) -> int:
        return {LocationKind.VERTEX: 0, LocationKind.EDGE: 1, LocationKind.INTERIOR: 2}[self.kind]

    def location(self) -> PointLocation:
        return PointLocation(self.kind, self.index)

    def pivots(self) -> PivotSets:
        return PivotSets(frozenset(self.couples))

    def to_json(self) -> Dict:
        return {"kind": self.kind.value, "index": self.index, "couples": [list(c) for c in self.couples]}


@dataclass(frozen=True)
class PathInfo:
    d_value: float
    targets: Tuple[Target, ...]
    points: Tuple[Point, ...]

    def to_json(self) -> Dict:
        return {
            "d": self.d_value,
            "targets": [
                dict(t.to_json(), point=[p.x, p.y]) for t, p in zip(self.targets, self.points)
            ],
        }


@dataclass(frozen=True)
class CandidatePoint:
    point: Point
    case_tag: str
    d_value: Optional[float] = None
    path_info: Optional[PathInfo] = None

    def to_json(self) -> Dict:
        out: Dict = {"point": [self.point.x, self.point.y], "case": self.case_tag}
        if self.d_value is not None:
            out["d"] = self.d_value
        if self.path_info is not None:
            out["paths"] = self.path_info.to_json()
        return out


@dataclass
class EquationSystem:
    """Residuals over the unknowns (source parameters, then target parameters)"""

    unknowns: List[str]
    n_constraints: int
    residual: Callable[[np.ndarray], np.ndarray]
    unpack: Callable[[np.ndarray], Tuple[np.ndarray, List[np.ndarray]]] = None
    targets: Tuple[Target, ...] = ()
    source_edge: Optional[int] = None
    tag: str = ""


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.limit:
            raise CombinatorialBudgetExceeded(f"tuple enumeration passed {self.limit}")


# --------------------------------------------------------------------------
# seed harvesting
# --------------------------------------------------------------------------


@dataclass
class Observation:
    seed: np.ndarray
    location: PointLocation
    targets: List[Tuple[Target, np.ndarray, float]]
    dmax: float = 0.0


@dataclass(eq=False)
class CandidateContext:
    dom: PolygonalDomain
    graph: VisibilityGraph
    spacing: float
    observations: List[Observation] = field(default_factory=list)
    report: Optional[GeneralPositionReport] = None


def target_from_farthest(dom: PolygonalDomain, graph: VisibilityGraph, fp: FarthestPoint) -> Optional[Target]:
    """Template of a non-degenerate farthest point, None if it has none"""
    loc = fp.location
    if loc.kind is LocationKind.VERTEX:
        k = loc.index
        if fp.direct:
            return Target(LocationKind.VERTEX, ((k, k),), k)
        roots = sorted(fp.pivots.s_pivots)
        if len(roots) != 1:
            return None
        return Target(LocationKind.VERTEX, ((roots[0], k),), k)
    if fp.direct:
        return None
    need = 2 if loc.kind is LocationKind.EDGE else 3
    couples = tuple(sorted(fp.pivots.couples))
    if len(couples) != need or len(fp.pivots.t_pivots) != need:
        return None
    return Target(loc.kind, couples, loc.index)


def seed_points(dom: PolygonalDomain, settings: Optional[Settings] = None) -> Tuple[np.ndarray, np.ndarray, float]:
    """Interior grid seeds, boundary seeds and the grid spacing"""
    settings = settings or get_settings()
    k = settings.candidates.seed_grid
    x0, y0, x1, y1 = dom.bbox
    spacing = max(x1 - x0, y1 - y0) / k
    xs = np.arange(x0 + spacing / 2.0, x1, spacing)
    ys = np.arange(y0 + spacing / 2.0, y1, spacing)
    grid = np.array([(x, y) for y in ys for x in xs])
    inner = grid[in_interior(dom, grid)] if len(grid) else grid
    m = settings.candidates.edge_seeds
    params = np.arange(1, m + 1) / (m + 1)
    boundary = np.array(
        [dom.edge_a[e] + t * (dom.edge_b[e] - dom.edge_a[e]) for e in range(len(dom.edges)) for t in params]
    )
    return inner, boundary, spacing


def build_context(
    dom: PolygonalDomain, graph: VisibilityGraph, settings: Optional[Settings] = None
) -> CandidateContext:
    settings = settings or get_settings()
    inner, boundary, spacing = seed_points(dom, settings)
    slack = settings.candidates.near_margin * spacing
    ctx = CandidateContext(dom, graph, spacing)
    for seed in itertools.chain(inner, boundary):
        report = dmax_and_farthest(dom, graph, seed, slack=slack)
        found = []
        for fp in report.near:
            target = target_from_farthest(dom, graph, fp)
            if target is not None:
                found.append((target, xy(fp.point), fp.value))
        found.sort(key=lambda item: -item[2])
        ctx.observations.append(
            Observation(np.asarray(seed, dtype=float), classify(dom, seed), found[: settings.candidates.max_group], report.dmax)
        )
    logger.info("🔍 Harvested %d seed observations (spacing %.4g)", len(ctx.observations), spacing)
    return ctx


def _require_general_position(ctx: CandidateContext, force: bool) -> None:
    if ctx.report is None:
        ctx.report = check_general_position(ctx.dom, ctx.graph)
    if not ctx.report.clean and not force:
        raise GeneralPositionViolated(
            f"{len(ctx.report.collinear)} collinear triples, "
            f"{len(ctx.report.multi_path_pairs)} vertex pairs with tied paths; use force to proceed"
        )


# --------------------------------------------------------------------------
# equation systems
# --------------------------------------------------------------------------


def _path_lengths(dom: PolygonalDomain, graph: VisibilityGraph, s: np.ndarray, target: Target, t: np.ndarray) -> np.ndarray:
    out = np.empty(len(target.couples))
    for j, (u, v) in enumerate(target.couples):
        pu, pv = dom.vertices[u], dom.vertices[v]
        out[j] = math.hypot(s[0] - pu[0], s[1] - pu[1]) + graph.apsp[u, v] + math.hypot(t[0] - pv[0], t[1] - pv[1])
    return out


def _target_point(dom: PolygonalDomain, target: Target, params: np.ndarray) -> np.ndarray:
    if target.kind is LocationKind.VERTEX:
        return dom.vertices[target.index]
    if target.kind is LocationKind.EDGE:
        a, b = dom.edge_a[target.index], dom.edge_b[target.index]
        return a + params[0] * (b - a)
    return params[:2]


def _target_params(dom: PolygonalDomain, target: Target, t: np.ndarray) -> List[float]:
    if target.kind is LocationKind.VERTEX:
        return []
    if target.kind is LocationKind.EDGE:
        a, b = dom.edge_a[target.index], dom.edge_b[target.index]
        d = b - a
        return [float(np.dot(t - a, d) / np.dot(d, d))]
    return [float(t[0]), float(t[1])]


def pirange_of_target(dom: PolygonalDomain, s: np.ndarray, target: Target, t: np.ndarray):
    return pirange_for(dom, s, t, target.location(), target.pivots(), direct=False)


def _bounding_angle(dom: PolygonalDomain, s: np.ndarray, target: Target, t: np.ndarray) -> Optional[float]:
    try:
        res = pirange_of_target(dom, s, target, t)
    except GeocenterError:
        return None
    if res.special or not res.range.intervals:
        return None
    return res.range.intervals[0].start


def _special_residuals(dom: PolygonalDomain, s: np.ndarray, target: Target, t: np.ndarray) -> Optional[List[float]]:
    pairs = [(dom.vertices[u], dom.vertices[v]) for u, v in target.couples]
    try:
        if target.kind is LocationKind.EDGE:
            e = target.index
            (a1, a2, b1, b2), _ = edge_angles(s, t, dom.edge_a[e], dom.edge_b[e], pairs)
            return [wrap_pi(a2 - a1 - math.pi), b1 + b2 - math.pi]
        canon = canonicalize_interior(s, t, pairs, eps=dom.eps)
        a, b = interior_gaps(canon.alphas, canon.betas)
        return [wrap_pi(a[0] - b[0]), wrap_pi(a[1] - b[1])]
    except GeocenterError:
        return None


def build_system(
    dom: PolygonalDomain,
    graph: VisibilityGraph,
    targets: Sequence[Target],
    source_edge: Optional[int] = None,
    extra: str = "equal",
    tag: str = "",
) -> EquationSystem:
    """Assemble the residuals for a combination of target templates

    extra is one of "equal" (lengths only), "overlap" (two π-range bounding
    lines coincide with opposite orientation), "contains-edge" (the bounding
    line contains the source's edge) or "special".
    """
    targets = tuple(targets)
    n_s = 1 if source_edge is not None else 2
    offsets = []
    pos = n_s
    names = ["s_lambda"] if source_edge is not None else ["s_x", "s_y"]
    for i, t in enumerate(targets):
        offsets.append(pos)
        pos += t.unknowns
        names += [f"t{i}_{k}" for k in range(t.unknowns)]
    scale = max(1.0, dom.diameter)
    penalty = 10.0 * scale

    def unpack(x: np.ndarray) -> Tuple[np.ndarray, List[np.ndarray]]:
        if source_edge is not None:
            a, b = dom.edge_a[source_edge], dom.edge_b[source_edge]
            s = a + x[0] * (b - a)
        else:
            s = x[:2]
        ts = [_target_point(dom, t, x[o:o + t.unknowns]) for t, o in zip(targets, offsets)]
        return s, ts

    def residual(x: np.ndarray) -> np.ndarray:
        s, ts = unpack(x)
        lengths = [_path_lengths(dom, graph, s, t, p) for t, p in zip(targets, ts)]
        out: List[float] = []
        for L in lengths:
            out.extend(L[0] - L[1:])
        for L in lengths[1:]:
            out.append(lengths[0][0] - L[0])
        if extra == "overlap":
            th = [_bounding_angle(dom, s, t, p) for t, p in zip(targets[:2], ts[:2])]
            out.append(penalty if None in th else scale * wrap_pi(th[0] - th[1] - math.pi))
        elif extra == "contains-edge":
            th = _bounding_angle(dom, s, targets[0], ts[0])
            phi = angle_of(dom.edge_a[source_edge], dom.edge_b[source_edge])
            out.append(penalty if th is None else scale * wrap_pi(th - phi - math.pi))
        elif extra == "special":
            sp = _special_residuals(dom, s, targets[0], ts[0])
            out.extend([penalty, penalty] if sp is None else [scale * r for r in sp])
        return np.asarray(out, dtype=float)

    n_constraints = sum(len(t.couples) - 1 for t in targets) + len(targets) - 1
    n_constraints += {"equal": 0, "overlap": 1, "contains-edge": 1, "special": 2}[extra]
    return EquationSystem(names, n_constraints, residual, unpack, targets, source_edge, tag)


def initial_guess(
    dom: PolygonalDomain, system: EquationSystem, s: np.ndarray, points: Sequence[np.ndarray]
) -> np.ndarray:
    x: List[float] = []
    if system.source_edge is not None:
        a, b = dom.edge_a[system.source_edge], dom.edge_b[system.source_edge]
        d = b - a
        x.append(float(np.dot(s - a, d) / np.dot(d, d)))
    else:
        x.extend([float(s[0]), float(s[1])])
    for t, p in zip(system.targets, points):
        x.extend(_target_params(dom, t, p))
    return np.asarray(x, dtype=float)


def solve_system(system: EquationSystem, seeds: Sequence[np.ndarray], scale: float = 1.0) -> List[np.ndarray]:
    """Gauss-Newton from each seed; converged, deduplicated solutions"""
    tol = 1e-12 * max(1.0, scale)
    out: List[np.ndarray] = []
    n = len(system.unknowns)
    for x0 in seeds:
        x0 = np.asarray(x0, dtype=float)
        if len(x0) != n:
            continue
        method = "lm" if system.n_constraints >= n else "trf"
        try:
            res = least_squares(system.residual, x0, method=method, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400)
        except (ValueError, FloatingPointError) as e:
            logger.debug("⚠️ Solver failed from %s: %s", x0, e)
            continue
        if not np.all(np.isfinite(res.fun)) or np.max(np.abs(res.fun), initial=0.0) > tol:
            continue
        if any(np.max(np.abs(res.x - y)) <= 1e-9 * max(1.0, scale) for y in out):
            continue
        out.append(res.x)
    return out


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------


def validate_quadruple(
    dom: PolygonalDomain,
    graph: VisibilityGraph,
    s_hat: PointLike,
    t_hats: Sequence[PointLike],
    targets: Sequence[Target],
) -> bool:
    """Genuine paths, pivot placement, order consistency and an empty range intersection"""
    s = xy(s_hat)
    loc_s = classify(dom, s)
    if loc_s.kind is LocationKind.OUTSIDE:
        return False
    field = SourceField.build(dom, graph, s)
    pts = [xy(t) for t in t_hats]
    if any(not in_domain(dom, p[None, :])[0] for p in pts):
        return False
    actual, _ = field.distances(np.array(pts))
    d_ref = float(actual[0])
    tol = max(10.0 * dom.eps, 1e-9 * d_ref)
    ranges: List[DirectionRange] = []
    for target, p, d in zip(targets, pts, actual):
        claimed = _path_lengths(dom, graph, s, target, p)
        if np.max(np.abs(claimed - d)) > tol or abs(d - d_ref) > tol:
            return False
        loc = classify(dom, p)
        if loc.kind is not target.kind or (target.index is not None and loc.index != target.index):
            return False
        if target.kind is not LocationKind.VERTEX and not obs10_check(dom, p, loc, target.pivots()):
            return False
        try:
            ranges.append(pirange_of_target(dom, s, target, p).range)
        except GeocenterError:
            # crossing orders (NotCanonical) and malformed couples both land here
            return False
    if loc_s.kind is not LocationKind.INTERIOR:
        ranges.append(free_direction_range(dom, s))
    eps = get_settings().tolerances.eps_ang
    return range_intersect(ranges, eps).is_empty(eps)


def _emit(
    dom: PolygonalDomain,
    graph: VisibilityGraph,
    system: EquationSystem,
    x: np.ndarray,
) -> Optional[CandidatePoint]:
    s, ts = system.unpack(x)
    if system.source_edge is not None and not (0.0 < x[0] < 1.0):
        return None
    for t, p in zip(system.targets, ts):
        if t.kind is LocationKind.EDGE:
            lam = _target_params(dom, t, p)[0]
            if not (0.0 < lam < 1.0):
                return None
    if not validate_quadruple(dom, graph, s, ts, system.targets):
        return None
    d = float(_path_lengths(dom, graph, s, system.targets[0], ts[0])[0])
    info = PathInfo(d, system.targets, tuple(Point.of(p) for p in ts))
    return CandidatePoint(Point.of(s), system.tag, d, info)


# --------------------------------------------------------------------------
# closed forms for all-vertex targets
# --------------------------------------------------------------------------


def segment_split(u1: np.ndarray, u2: np.ndarray, w1: float, w2: float, margin: float = 0.0) -> Optional[np.ndarray]:
    """Point on segment u1u2 with w1 + |s u1| = w2 + |s u2|"""
    length = float(np.hypot(*(u2 - u1)))
    x = (length + w2 - w1) / 2.0
    if not (margin < x < length - margin):
        return None
    return u1 + (x / length) * (u2 - u1)


def _vertex_pair_candidates(
    dom: PolygonalDomain, graph: VisibilityGraph, targets: Sequence[Target], tag: str
) -> List[CandidatePoint]:
    (u1, k1), (u2, k2) = targets[0].couples[0], targets[1].couples[0]
    if u1 == u2 or not graph.adjacency[u1, u2]:
        return []
    p1, p2 = dom.vertices[u1], dom.vertices[u2]
    s = segment_split(p1, p2, graph.apsp[u1, k1], graph.apsp[u2, k2], dom.eps)
    if s is None:
        return []
    pts = [dom.vertices[k1], dom.vertices[k2]]
    if not validate_quadruple(dom, graph, s, pts, targets):
        return []
    d = float(graph.apsp[u1, k1] + np.hypot(*(s - p1)))
    return [CandidatePoint(Point.of(s), tag, d, PathInfo(d, tuple(targets), tuple(Point.of(p) for p in pts)))]


def _vertex_triple_candidates(
    dom: PolygonalDomain, graph: VisibilityGraph, targets: Sequence[Target], tag: str
) -> List[CandidatePoint]:
    roots = [t.couples[0] for t in targets]
    if len({u for u, _ in roots}) < 3:
        return []
    sites = np.array([[dom.vertices[u] for u, _ in roots]])
    weights = np.array([[graph.apsp[u, k] for u, k in roots]])
    sols, valid = apollonius(sites, weights)
    out = []
    pts = [dom.vertices[k] for _, k in roots]
    for j in range(2):
        if not valid[0, j]:
            continue
        s = sols[0, j]
        if not validate_quadruple(dom, graph, s, pts, targets):
            continue
        d = float(weights[0, 0] + np.hypot(*(s - sites[0, 0])))
        out.append(CandidatePoint(Point.of(s), tag, d, PathInfo(d, tuple(targets), tuple(Point.of(p) for p in pts))))
    return out


# --------------------------------------------------------------------------
# generators
# --------------------------------------------------------------------------


def _combos(ctx: CandidateContext) -> Dict[Tuple, List[Tuple[np.ndarray, List[np.ndarray]]]]:
    """Co-observed target combinations keyed by (source edge, targets), with their seeds"""
    combos: Dict[Tuple, List[Tuple[np.ndarray, List[np.ndarray]]]] = {}
    for obs in ctx.observations:
        source_edge = obs.location.index if obs.location.kind is LocationKind.EDGE else None
        if obs.location.kind not in (LocationKind.EDGE, LocationKind.INTERIOR):
            continue
        sizes = (1, 2) if source_edge is not None else (1, 2, 3)
        for size in sizes:
            for group in itertools.combinations(obs.targets, size):
                key = (source_edge, tuple(sorted((g[0] for g in group), key=repr)))
                order = {repr(g[0]): g[1] for g in group}
                pts = [order[repr(t)] for t in key[1]]
                combos.setdefault(key, []).append((obs.seed, pts))
    return combos


def general_candidates(
    dom: PolygonalDomain,
    graph: VisibilityGraph,
    case: Optional[str] = None,
    context: Optional[CandidateContext] = None,
    force: bool = False,
    settings: Optional[Settings] = None,
) -> List[CandidatePoint]:
    """Dominating-case candidates; case restricts the output to one tag"""
    settings = settings or get_settings()
    ctx = context or build_context(dom, graph, settings)
    _require_general_position(ctx, force)
    budget = _Budget(settings.candidates.tuple_budget)
    out: List[CandidatePoint] = []
    per_key_seeds = max(1, settings.center.refine_seeds)

    for (source_edge, targets), seeds in sorted(_combos(ctx).items(), key=lambda kv: repr(kv[0])):
        on_edge = source_edge is not None
        if len(targets) == 1 and not on_edge:
            continue  # single-target interior sources are the special case
        tag = general_tag((t.kind for t in targets), on_edge)
        if case is not None and case != tag:
            continue
        budget.spend()
        kinds = {t.kind for t in targets}
        if not on_edge and kinds == {LocationKind.VERTEX}:
            if len(targets) == 3:
                out.extend(_vertex_triple_candidates(dom, graph, targets, tag))
            else:
                out.extend(_vertex_pair_candidates(dom, graph, targets, tag))
            continue
        if on_edge:
            extra = "contains-edge" if len(targets) == 1 else "equal"
        else:
            extra = "overlap" if len(targets) == 2 else "equal"
        system = build_system(dom, graph, targets, source_edge, extra, tag)
        if system.n_constraints != len(system.unknowns):
            continue
        found = _solve_from_seeds(dom, graph, system, seeds[:per_key_seeds], ctx.spacing, settings)
        out.extend(found)
    logger.info("🎯 General generator: %d candidates (%d systems)", len(out), budget.used)
    return out


def _solve_from_seeds(
    dom: PolygonalDomain,
    graph: VisibilityGraph,
    system: EquationSystem,
    seeds: Sequence[Tuple[np.ndarray, List[np.ndarray]]],
    spacing: float,
    settings: Settings,
) -> List[CandidatePoint]:
    guesses = [initial_guess(dom, system, s, pts) for s, pts in seeds]
    sols = solve_system(system, guesses, dom.diameter)
    if not sols:
        # perturb the source part of the first guess
        base = guesses[0]
        k = settings.candidates.newton_seeds
        extra = []
        for a in np.linspace(0.0, 2.0 * math.pi, k, endpoint=False):
            g = base.copy()
            if system.source_edge is not None:
                g[0] += 0.25 * math.cos(a) * spacing / max(dom.diameter, 1e-12)
            else:
                g[0] += 0.5 * spacing * math.cos(a)
                g[1] += 0.5 * spacing * math.sin(a)
            extra.append(g)
        sols = solve_system(system, extra, dom.diameter)
    out = []
    for x in sols:
        cand = _emit(dom, graph, system, x)
        if cand is not None:
            out.append(cand)
    return out


def special_candidates(
    dom: PolygonalDomain,
    graph: VisibilityGraph,
    context: Optional[CandidateContext] = None,
    force: bool = False,
    settings: Optional[Settings] = None,
) -> List[CandidatePoint]:
    """Centers with a single farthest point: closed-form edge branch plus interior systems"""
    settings = settings or get_settings()
    ctx = context or build_context(dom, graph, settings)
    _require_general_position(ctx, force)
    budget = _Budget(settings.candidates.tuple_budget)
    out = _special_edge_branch(dom, graph, budget)

    seen = set()
    for obs in ctx.observations:
        if obs.location.kind is not LocationKind.INTERIOR:
            continue
        for target, t_pt, _ in obs.targets:
            if target.kind is not LocationKind.INTERIOR or target in seen:
                continue
            seen.add(target)
            budget.spend()
            system = build_system(dom, graph, [target], None, "special", SPECIAL_I)
            out.extend(_solve_from_seeds(dom, graph, system, [(obs.seed, [t_pt])], ctx.spacing, settings))
    logger.info("🎯 Special generator: %d candidates", len(out))
    return out


def _special_edge_branch(dom: PolygonalDomain, graph: VisibilityGraph, budget: _Budget) -> List[CandidatePoint]:
    out: List[CandidatePoint] = []
    n = dom.n
    eps = dom.eps
    for e in range(len(dom.edges)):
        a, b = dom.edge_a[e], dom.edge_b[e]
        length = float(np.hypot(*(b - a)))
        d = (b - a) / length
        normal = np.array([-d[1], d[0]])
        xs = (dom.vertices - a) @ d
        ys = (dom.vertices - a) @ normal
        above = np.nonzero(ys > eps)[0]
        for v1, v2 in itertools.combinations(above.tolist(), 2):
            budget.spend()
            if abs(xs[v1] - xs[v2]) <= eps:
                continue
            x_t = (xs[v1] * ys[v2] + xs[v2] * ys[v1]) / (ys[v1] + ys[v2])
            if not (eps < x_t < length - eps):
                continue
            t = a + x_t * d
            ends = dom.vertices[[v1, v2]]
            if not np.all(segments_visible(dom, np.array([t, t]), ends)):
                continue
            field = SourceField.build(dom, graph, t)
            hop = field._first_hop
            roots1 = np.nonzero(np.abs(hop[v1] - field.to_vertex) <= 10 * eps)[0]
            roots2 = np.nonzero(np.abs(hop[v2] - field.to_vertex) <= 10 * eps)[0]
            pairs = [(u1, u2) for u1 in roots1.tolist() for u2 in roots2.tolist() if u1 != u2 and graph.adjacency[u1, u2]]
            budget.spend(len(pairs))
            shats, meta = [], []
            for u1, u2 in pairs:
                s = segment_split(dom.vertices[u1], dom.vertices[u2], field.to_vertex[u1], field.to_vertex[u2], eps)
                if s is not None:
                    shats.append(s)
                    meta.append((u1, u2))
            if not shats:
                continue
            shats = np.array(shats)
            real, _ = field.distances(shats)
            for s, (u1, u2), dv in zip(shats, meta, real):
                claimed = field.to_vertex[u1] + float(np.hypot(*(s - dom.vertices[u1])))
                if abs(dv - claimed) > 10 * eps * max(1.0, claimed):
                    continue
                target = Target(LocationKind.EDGE, tuple(sorted(((u1, v1), (u2, v2)))), e)
                info = PathInfo(float(dv), (target,), (Point.of(t),))
                out.append(CandidatePoint(Point.of(s), SPECIAL_E, float(dv), info))
    return out


def _spm_vertex_analogs(
    dom: PolygonalDomain,
    graph: VisibilityGraph,
    field: SourceField,
    t: np.ndarray,
    roots: np.ndarray,
    budget: _Budget,
    tag_interior: str,
) -> List[CandidatePoint]:
    """Points with several tied shortest paths to t through the given root vertices"""
    out: List[CandidatePoint] = []
    eps = dom.eps
    sites = dom.vertices[roots]
    weights = field.to_vertex[roots]
    m = len(roots)

    def keep(points: np.ndarray, values: np.ndarray, tag: str) -> None:
        if not len(points):
            return
        ok = in_domain(dom, points)
        points, values = points[ok], values[ok]
        if not len(points):
            return
        real, _ = field.distances(points)
        good = np.abs(real - values) <= 10 * eps * np.maximum(1.0, values)
        for s, dv in zip(points[good], real[good]):
            out.append(CandidatePoint(Point.of(s), tag, float(dv)))

    if m >= 3:
        tri = np.array(list(itertools.combinations(range(m), 3)), dtype=int)
        budget.spend(len(tri))
        sols, valid = apollonius(sites[tri], weights[tri])
        vals = weights[tri[:, 0]][:, None] + np.hypot(
            sols[..., 0] - sites[tri[:, 0]][:, None, 0], sols[..., 1] - sites[tri[:, 0]][:, None, 1]
        )
        pts, v = sols[valid], vals[valid]
        inner = in_interior(dom, pts) if len(pts) else np.zeros(0, dtype=bool)
        keep(pts[inner], v[inner], tag_interior)

    if m >= 2:
        ii, jj = np.triu_indices(m, 1)
        budget.spend(len(ii))
        seg_pts, seg_vals = [], []
        for i, j in zip(ii.tolist(), jj.tolist()):
            ri, rj = int(roots[i]), int(roots[j])
            if not graph.adjacency[ri, rj]:
                continue
            s = segment_split(sites[i], sites[j], weights[i], weights[j], eps)
            if s is not None:
                seg_pts.append(s)
                seg_vals.append(weights[i] + float(np.hypot(*(s - sites[i]))))
        if seg_pts:
            keep(np.array(seg_pts), np.array(seg_vals), tag_interior)

        for e in range(len(dom.edges)):
            a, b = dom.edge_a[e], dom.edge_b[e]
            lam, i1, _ = pair_roots_on_segment(a, b, sites, weights, margin=eps / float(np.hypot(*(b - a))))
            if not len(lam):
                continue
            pts = a + lam[:, None] * (b - a)
            vals = weights[i1] + np.hypot(*(pts - sites[i1]).T)
            keep(pts, vals, DEGENERATE_EDGE)
    return out


def degenerate_candidates(
    dom: PolygonalDomain,
    graph: VisibilityGraph,
    context: Optional[CandidateContext] = None,
    force: bool = False,
    settings: Optional[Settings] = None,
) -> List[CandidatePoint]:
    """Vertices, tied-path points of vertex targets and of segment crossings, edge loci"""
    settings = settings or get_settings()
    ctx = context or CandidateContext(dom, graph, 0.0)
    _require_general_position(ctx, force)
    budget = _Budget(settings.candidates.tuple_budget)
    out = [CandidatePoint(dom.vertex(k), VERTEX) for k in range(dom.n)]

    for k in range(dom.n):
        field = SourceField.build(dom, graph, dom.vertices[k])
        roots = np.nonzero(np.isfinite(field.to_vertex) & (np.arange(dom.n) != k))[0]
        out.extend(_spm_vertex_analogs(dom, graph, field, dom.vertices[k], roots, budget, DEGENERATE_VERTEX))

    # t at the crossing of two vertex-vertex segments, seeing all four ends
    pairs = list(itertools.combinations(range(dom.n), 2))
    for (v1, v2), (v3, v4) in itertools.combinations(pairs, 2):
        if len({v1, v2, v3, v4}) < 4:
            continue
        budget.spend()
        t = _segment_crossing(dom.vertices[v1], dom.vertices[v2], dom.vertices[v3], dom.vertices[v4])
        if t is None or not in_interior(dom, t[None, :])[0]:
            continue
        quad = [v1, v2, v3, v4]
        if not np.all(segments_visible(dom, np.repeat(t[None, :], 4, axis=0), dom.vertices[quad])):
            continue
        field = SourceField.build(dom, graph, t)
        hop = field._first_hop
        via = np.zeros(dom.n, dtype=bool)
        for v in quad:
            via |= np.abs(hop[v] - field.to_vertex) <= 10 * dom.eps
        roots = np.nonzero(via & np.isfinite(field.to_vertex))[0]
        out.extend(_spm_vertex_analogs(dom, graph, field, t, roots, budget, DEGENERATE_CROSSING))
    logger.info("🎯 Degenerate generator: %d candidates", len(out))
    return out


def _segment_crossing(p1: np.ndarray, p2: np.ndarray, p3: np.ndarray, p4: np.ndarray) -> Optional[np.ndarray]:
    d1, d2 = p2 - p1, p4 - p3
    den = float(cross(d1, d2))
    if abs(den) <= 1e-15:
        return None
    r = float(cross(p3 - p1, d2)) / den
    q = float(cross(p3 - p1, d1)) / den
    if not (0.0 < r < 1.0 and 0.0 < q < 1.0):
        return None
    return p1 + r * d1


def dedupe(points: Sequence[CandidatePoint], eps: float = 1e-9) -> List[CandidatePoint]:
    """Merge candidates closer than eps, keeping the largest d_value"""
    if not points:
        return []
    coords = np.array([[c.point.x, c.point.y] for c in points])
    tree = cKDTree(coords)
    parent = list(range(len(points)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in sorted(tree.query_pairs(eps)):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    groups: Dict[int, List[int]] = {}
    for i in range(len(points)):
        groups.setdefault(find(i), []).append(i)
    out = []
    for root in sorted(groups):
        members = [points[i] for i in groups[root]]
        valued = [c for c in members if c.d_value is not None]
        out.append(max(valued, key=lambda c: c.d_value) if valued else members[0])
    return out
