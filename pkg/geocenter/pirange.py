"""
🧮 ADMISSIBLE DIRECTION RANGES
Closed forms for the π-range R_π(s, t): the open range of directions r_s for
which some motion of t keeps every shortest s-t path shrinking.

- vertex case: the open half-plane toward the single s-pivot
- edge case: λ = cos α − cos β₂ / cos β₁ decides the bounding angle
- interior case: δ, δ₁, δ₂ decide the bounding angle
- special configurations (α = ±π with β₁ + β₂ = π, or a_i = b_i for every i)
  give an empty range

feasibility_oracle decides the same membership by brute force: every
coupled path derivative cos γ_s + τ cos γ_t is linear in w = τ·r_t, so
existence of a good (r_t, τ) is a tiny LP solved with scipy.

Usage:
    res = pirange_edge(math.radians(30), math.radians(90), math.radians(30), math.radians(135))
    res.range.contains(0.0)       # True
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from .config import Tolerances, get_settings
from .domain import LocationKind, PointLocation, PolygonalDomain, classify, free_direction_range
from .errors import (
    DegenerateFarthest,
    DegenerateInput,
    NotApplicable,
    NotCanonical,
    OutsideDomain,
    PreconditionViolated,
)
from .farthest import FarthestPoint, dmax_and_farthest
from .geodesic import PivotSets, SourceField, vertex_visibility
from .geom_core import (
    TWO_PI,
    DirectionRange,
    PointLike,
    angle_of,
    ccw_delta,
    cross,
    distance,
    halfplane_range,
    normalize_angle,
    range_intersect,
    xy,
)
from .visibility import VisibilityGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PathDerivativeInput:
    s: Tuple[float, float]
    t: Tuple[float, float]
    u: Tuple[float, float]
    v: Tuple[float, float]
    r_s: float
    r_t: float
    tau: float = 0.0


@dataclass(frozen=True)
class PiRangeResult:
    range: DirectionRange
    special: bool
    diagnostics: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> Dict[str, object]:
        return {"range": self.range.to_json(), "special": self.special}


def _tol(tolerances: Optional[Tolerances]) -> Tolerances:
    return tolerances or get_settings().tolerances


def path_derivatives(inp: PathDerivativeInput) -> Tuple[float, float]:
    """First and second derivative of |su| + d(u,v) + |vt| as s and t move"""
    if inp.tau < 0.0:
        raise DegenerateInput("tau must be non-negative")
    su = distance(inp.s, inp.u)
    tv = distance(inp.t, inp.v)
    if su <= 0.0 or tv <= 0.0:
        raise DegenerateInput("s coincides with u or t coincides with v")
    gamma_s = inp.r_s - angle_of(inp.u, inp.s)
    gamma_t = inp.r_t - angle_of(inp.v, inp.t)
    d1 = math.cos(gamma_s) + inp.tau * math.cos(gamma_t)
    d2 = math.sin(gamma_s) ** 2 / su + inp.tau * math.sin(gamma_t) ** 2 / tv
    return d1, d2


def pirange_vertex(s: PointLike, u: PointLike) -> PiRangeResult:
    alpha = angle_of(s, u)
    return PiRangeResult(halfplane_range(alpha), False, {"alpha": alpha})


def pirange_edge(
    alpha1: float, alpha2: float, beta1: float, beta2: float, tolerances: Optional[Tolerances] = None
) -> PiRangeResult:
    tol = _tol(tolerances)
    eps = tol.eps_ang
    if not (-eps <= beta1 < math.pi / 2.0) or not (math.pi / 2.0 < beta2 <= math.pi + eps):
        raise PreconditionViolated(f"edge angles out of range: beta1={beta1}, beta2={beta2}")
    if beta1 > beta2:
        raise PreconditionViolated("beta1 must not exceed beta2")
    if abs(beta1) <= eps and abs(beta2 - math.pi) <= eps:
        raise PreconditionViolated("beta1 = 0 and beta2 = pi together")

    alpha = alpha2 - alpha1
    lam = math.cos(alpha) - math.cos(beta2) / math.cos(beta1)
    sin_a = math.sin(alpha)
    diag = {"lambda": lam, "alpha": alpha, "beta1": beta1, "beta2": beta2, "sin_alpha": sin_a}
    es = tol.eps_special
    if abs(sin_a) <= es:
        if lam > es:
            return PiRangeResult(halfplane_range(alpha1), False, diag)
        if lam < -es:
            return PiRangeResult(halfplane_range(alpha1 - math.pi), False, diag)
        return PiRangeResult(DirectionRange.nothing(), True, diag)
    start = alpha1 - math.atan(lam / sin_a)
    if sin_a < 0.0:
        start -= math.pi
    return PiRangeResult(DirectionRange.interval(start, start + math.pi), False, diag)


def interior_gaps(alphas: Sequence[float], betas: Sequence[float]) -> Tuple[List[float], List[float]]:
    """a_i counterclockwise gaps between s-pivot directions, b_i clockwise gaps between t-pivot directions"""
    a = [ccw_delta(alphas[i], alphas[(i + 1) % 3]) for i in range(3)]
    b = [ccw_delta(betas[(i + 1) % 3], betas[i]) for i in range(3)]
    return a, b


def interior_deltas(alphas: Sequence[float], betas: Sequence[float]) -> Tuple[float, float, float]:
    a1, a2, a3 = alphas
    b1, b2, b3 = betas
    delta = math.sin(a3 - a1) / math.sin(b3 - b1) - math.sin(a2 - a1) / math.sin(b2 - b1)
    delta1 = (math.cos(b2 - b1) - math.cos(a2 - a1)) / math.sin(b2 - b1)
    delta2 = (math.cos(b3 - b1) - math.cos(a3 - a1)) / math.sin(b3 - b1)
    return delta, delta1, delta2


def pirange_interior(
    alphas: Sequence[float], betas: Sequence[float], tolerances: Optional[Tolerances] = None
) -> PiRangeResult:
    tol = _tol(tolerances)
    a, b = interior_gaps(alphas, betas)
    eps = max(tol.eps_ang, 1e-12)
    if any(not (eps < bi < math.pi - eps) for bi in b) or abs(sum(b) - TWO_PI) > 10 * eps:
        raise PreconditionViolated(f"t-pivot gaps {b} are not a canonical clockwise triple")

    delta, delta1, delta2 = interior_deltas(alphas, betas)
    alpha1 = alphas[0]
    diag = {
        "delta": delta,
        "delta1": delta1,
        "delta2": delta2,
        "alphas": tuple(alphas),
        "betas": tuple(betas),
        "a": tuple(a),
        "b": tuple(b),
    }
    es = tol.eps_special
    if abs(delta) <= es:
        gap = delta1 - delta2
        if gap > es:
            return PiRangeResult(halfplane_range(alpha1), False, diag)
        if gap < -es:
            return PiRangeResult(halfplane_range(alpha1 - math.pi), False, diag)
        return PiRangeResult(DirectionRange.nothing(), True, diag)
    start = alpha1 - math.atan((delta1 - delta2) / delta)
    if delta < 0.0:
        start -= math.pi
    return PiRangeResult(DirectionRange.interval(start, start + math.pi), False, diag)


def special_by_gaps(alphas: Sequence[float], betas: Sequence[float], eps: float) -> bool:
    a, b = interior_gaps(alphas, betas)
    return max(abs(ai - bi) for ai, bi in zip(a, b)) <= eps


def lemma150_check(delta: float, delta1: float, delta2: float, eps: float) -> bool:
    """Near-special δ values force both δ₁ and δ₂ near zero"""
    if abs(delta) <= eps and abs(delta1 - delta2) <= eps:
        bound = math.sqrt(eps)
        return abs(delta1) <= bound and abs(delta2) <= bound
    return True


def cot_inequality(betas: Sequence[float]) -> bool:
    b1, b2, b3 = betas
    return 1.0 / math.tan(b3 - b1) - 1.0 / math.tan(b2 - b1) < 0.0


def range_bounding_angle(result: PiRangeResult) -> float:
    """Start angle of a non-empty π-range"""
    if result.special or not result.range.intervals:
        raise PreconditionViolated("an empty range has no bounding line")
    return result.range.intervals[0].start


# --------------------------------------------------------------------------
# canonical labelling
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalCouples:
    alphas: Tuple[float, ...]
    betas: Tuple[float, ...]
    couples: Tuple[Tuple[Tuple[float, float], Tuple[float, float]], ...]


def canonicalize_interior(
    s: PointLike, t: PointLike, couples: Sequence[Tuple[PointLike, PointLike]], eps: float = 1e-9
) -> CanonicalCouples:
    """Order couples so v's run clockwise around t and u's counterclockwise around s"""
    if len(couples) != 3:
        raise PreconditionViolated("interior canonicalization needs three couples")
    us = [xy(u) for u, _ in couples]
    vs = [xy(v) for _, v in couples]
    q = xy(t)
    for i, j in itertools.combinations(range(3), 2):
        if np.hypot(*(vs[i] - vs[j])) <= eps:
            raise PreconditionViolated("two couples share a t-pivot")
    orient = [cross(vs[(i + 1) % 3] - vs[i], q - vs[i]) for i in range(3)]
    if not (all(o > eps for o in orient) or all(o < -eps for o in orient)):
        raise PreconditionViolated("t is not strictly inside the t-pivot triangle")

    betas = [angle_of(q, v) for v in vs]
    # clockwise around t: decreasing angle, starting from the first couple
    order = [0] + sorted((1, 2), key=lambda k: ccw_delta(betas[k], betas[0]))
    alphas = [angle_of(s, us[k]) for k in order]
    a_sum = sum(ccw_delta(alphas[i], alphas[(i + 1) % 3]) for i in range(3))
    if not (abs(a_sum - TWO_PI) <= 1e-6 or a_sum <= 1e-6):
        raise NotCanonical("s-pivots are not counterclockwise around s for the clockwise t-pivot order")
    return CanonicalCouples(
        tuple(alphas),
        tuple(betas[k] for k in order),
        tuple((tuple(us[k]), tuple(vs[k])) for k in order),
    )


def edge_angles(
    s: PointLike,
    t: PointLike,
    edge_start: PointLike,
    edge_end: PointLike,
    couples: Sequence[Tuple[PointLike, PointLike]],
) -> Tuple[Tuple[float, float, float, float], Tuple[Tuple[PointLike, PointLike], ...]]:
    """(α₁, α₂, β₁, β₂) for an edge target, with indices swapped so β₁ ≤ β₂

    The edge line is directed so the t-pivots are left of it or on it.
    """
    if len(couples) != 2:
        raise PreconditionViolated("edge angles need two couples")
    q = xy(t)
    line = xy(edge_end) - xy(edge_start)
    vs = [xy(v) for _, v in couples]
    if sum(cross(line, v - q) for v in vs) < 0.0:
        line = -line
    phi = math.atan2(line[1], line[0])
    betas = []
    for v in vs:
        b = ccw_delta(phi, angle_of(q, v))
        # pivots on the line just behind it measure as 2π
        if b > math.pi + 1e-9:
            b = 0.0 if b > 1.5 * math.pi else math.pi
        betas.append(b)
    order = (0, 1) if betas[0] <= betas[1] else (1, 0)
    alphas = [angle_of(s, couples[k][0]) for k in order]
    return (alphas[0], alphas[1], betas[order[0]], betas[order[1]]), tuple(couples[k] for k in order)


# --------------------------------------------------------------------------
# ranges for a concrete (s, t) pair
# --------------------------------------------------------------------------


def _couple_points(dom: PolygonalDomain, pivots: PivotSets) -> List[Tuple[np.ndarray, np.ndarray]]:
    return [(dom.vertices[u], dom.vertices[v]) for u, v in sorted(pivots.couples)]


def pirange_for(
    dom: PolygonalDomain,
    s: PointLike,
    t: PointLike,
    location: PointLocation,
    pivots: PivotSets,
    direct: bool,
    tolerances: Optional[Tolerances] = None,
) -> PiRangeResult:
    """R_π(s, t) from the closed form matching t's location class"""
    if direct:
        return pirange_vertex(s, t)
    pairs = _couple_points(dom, pivots)
    kind = location.kind
    if kind is LocationKind.VERTEX and len(pairs) == 1:
        return pirange_vertex(s, pairs[0][0])
    if kind is LocationKind.EDGE and len(pairs) == 2 and len(pivots.t_pivots) == 2:
        e = location.index
        angles, _ = edge_angles(s, t, dom.edge_a[e], dom.edge_b[e], pairs)
        return pirange_edge(*angles, tolerances=tolerances)
    if kind is LocationKind.INTERIOR and len(pairs) == 3 and len(pivots.t_pivots) == 3:
        canon = canonicalize_interior(s, t, pairs, eps=dom.eps)
        return pirange_interior(canon.alphas, canon.betas, tolerances)
    raise DegenerateFarthest(
        f"{len(pairs)} shortest paths do not match a {kind.value} farthest point"
    )


def _target_data(dom: PolygonalDomain, graph: VisibilityGraph, s: PointLike, t: PointLike, field=None):
    loc = classify(dom, t)
    if loc.kind is LocationKind.OUTSIDE:
        raise OutsideDomain(f"point {tuple(xy(t))} is outside the domain")
    field = field or SourceField.build(dom, graph, s)
    _, pivots, direct = field.couples(t, vertex_visibility(dom, xy(t))[0])
    return loc, pivots, direct


def admissible_range(
    dom: PolygonalDomain,
    graph: VisibilityGraph,
    s: PointLike,
    t: PointLike,
    tolerances: Optional[Tolerances] = None,
) -> DirectionRange:
    loc, pivots, direct = _target_data(dom, graph, s, t)
    pi = pirange_for(dom, s, t, loc, pivots, direct, tolerances)
    return range_intersect([free_direction_range(dom, s), pi.range])


def farthest_range(
    dom: PolygonalDomain, s: PointLike, fp: FarthestPoint, tolerances: Optional[Tolerances] = None
) -> DirectionRange:
    """R_π for a farthest point already carrying its pivots"""
    return pirange_for(dom, s, fp.point, fp.location, fp.pivots, fp.direct, tolerances).range


def necessary_condition(
    dom: PolygonalDomain, graph: VisibilityGraph, s: PointLike, tolerances: Optional[Tolerances] = None
) -> Tuple[bool, DirectionRange]:
    """Whether R(s), the intersection of R(s, t) over F(s), is empty"""
    tol = _tol(tolerances)
    report = dmax_and_farthest(dom, graph, s)
    if report.any_degenerate:
        raise NotApplicable("F(s) contains a degenerate farthest point")
    ranges = [free_direction_range(dom, s)]
    ranges.extend(farthest_range(dom, s, fp, tol) for fp in report.farthest)
    r = range_intersect(ranges, tol.eps_ang)
    return r.is_empty(tol.eps_ang), r


# --------------------------------------------------------------------------
# feasibility oracle
# --------------------------------------------------------------------------


def feasible_direction(
    s: PointLike,
    t: PointLike,
    couples: Sequence[Tuple[PointLike, PointLike]],
    kind: LocationKind,
    r_s: float,
    edge_direction: Optional[Sequence[float]] = None,
    margin: float = 1e-12,
) -> bool:
    """Is there a motion of t making every couple's path derivative negative?

    Each v must have at least one coupled u whose derivative is negative; with
    several u per v every choice is tried.
    """
    p, q = xy(s), xy(t)
    rs = np.array([math.cos(r_s), math.sin(r_s)])
    by_v: Dict[Tuple[float, float], List[np.ndarray]] = {}
    for u, v in couples:
        uu, vv = xy(u), xy(v)
        su, tv = p - uu, q - vv
        a = float(rs @ (su / np.hypot(*su)))
        e = tv / np.hypot(*tv)
        by_v.setdefault((float(vv[0]), float(vv[1])), []).append(np.array([a, e[0], e[1]]))
    groups = list(by_v.values())
    for choice in itertools.product(*groups):
        rows = np.array(choice)
        if _half_planes_feasible(rows, kind, edge_direction, margin):
            return True
    return False


def _half_planes_feasible(
    rows: np.ndarray, kind: LocationKind, edge_direction: Optional[Sequence[float]], margin: float
) -> bool:
    a = rows[:, 0]
    e = rows[:, 1:]
    if kind is LocationKind.VERTEX:
        return bool(np.all(a < -margin))
    if kind is LocationKind.EDGE:
        dvec = np.asarray(edge_direction, dtype=float)
        c = e @ dvec
        lower, upper = -math.inf, math.inf
        for ai, ci in zip(a, c):
            if abs(ci) <= 1e-15:
                if ai >= -margin:
                    return False
            elif ci > 0.0:
                upper = min(upper, -ai / ci)
            else:
                lower = max(lower, -ai / ci)
        return upper - lower > margin
    # maximize z subject to a_i + e_i·w + z <= 0, z <= 1
    k = len(a)
    res = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=np.hstack([e, np.ones((k, 1))]),
        b_ub=-a,
        bounds=[(None, None), (None, None), (None, 1.0)],
        method="highs",
    )
    return bool(res.status == 0 and -res.fun > margin)


def feasibility_oracle(
    dom: PolygonalDomain, graph: VisibilityGraph, s: PointLike, t: PointLike, r_s: float
) -> bool:
    loc, pivots, direct = _target_data(dom, graph, s, t)
    if direct:
        raise PreconditionViolated("s sees t; the visible case has no path derivatives")
    need = {LocationKind.VERTEX: 1, LocationKind.EDGE: 2, LocationKind.INTERIOR: 3}.get(loc.kind)
    if need is None or len(pivots.couples) != need:
        raise DegenerateFarthest(f"{len(pivots.couples)} shortest paths for a {loc.kind.value} point")
    edge_dir = dom.edge_direction(loc.index) if loc.kind is LocationKind.EDGE else None
    return feasible_direction(s, t, _couple_points(dom, pivots), loc.kind, r_s, edge_dir)
