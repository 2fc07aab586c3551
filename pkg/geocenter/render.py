"""
🖼️ SVG RENDERING
Deterministic SVG 1.1 output for domains and computed artifacts.

Layers are drawn in a fixed order whatever order they are requested in:
domain, grid-heatmap, visibility-graph, paths, pirange-fans, candidates,
centers. Coordinates are written with 6 decimals, so identical inputs give
byte-identical documents.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import get_settings
from .domain import PolygonalDomain
from .geom_core import DirectionRange, PointLike, xy

logger = logging.getLogger(__name__)

LAYER_ORDER = (
    "domain",
    "grid-heatmap",
    "visibility-graph",
    "paths",
    "pirange-fans",
    "candidates",
    "centers",
)


@dataclass(frozen=True)
class RenderSpec:
    width: int = 800
    height: int = 800
    layers: Tuple[str, ...] = ("domain",)
    margin: float = 0.05
    stroke_width: float = 1.5
    fan_radius: float = 0.08
    domain_fill: str = "#f4f1e8"
    hole_fill: str = "#9a9a9a"
    stroke: str = "#222222"

    @classmethod
    def from_settings(cls, layers: Sequence[str] = ("domain",)) -> "RenderSpec":
        r = get_settings().render
        return cls(r.width, r.height, tuple(layers), r.margin, r.stroke_width, r.fan_radius)


@dataclass
class Overlays:
    """Artifacts to draw; every field is optional"""

    graph: Optional[object] = None
    paths: List[Sequence[PointLike]] = field(default_factory=list)
    fans: List[Tuple[PointLike, DirectionRange]] = field(default_factory=list)
    candidates: List[PointLike] = field(default_factory=list)
    centers: List[PointLike] = field(default_factory=list)
    heat_points: Optional[np.ndarray] = None
    heat_values: Optional[np.ndarray] = None
    heat_cell: float = 0.0


def _f(x: float) -> str:
    return f"{x:.6f}"


class _Viewport:
    """World to pixel transform with the y axis pointing up"""

    def __init__(self, dom: PolygonalDomain, style: RenderSpec):
        x0, y0, x1, y1 = dom.bbox
        w, h = max(x1 - x0, 1e-12), max(y1 - y0, 1e-12)
        x0, x1 = x0 - style.margin * w, x1 + style.margin * w
        y0, y1 = y0 - style.margin * h, y1 + style.margin * h
        self.scale = min(style.width / (x1 - x0), style.height / (y1 - y0))
        self.ox = (style.width - self.scale * (x1 - x0)) / 2.0 - self.scale * x0
        self.oy = (style.height - self.scale * (y1 - y0)) / 2.0 + self.scale * y1
        self.world_size = max(x1 - x0, y1 - y0)

    def __call__(self, p: PointLike) -> Tuple[float, float]:
        q = xy(p)
        return self.ox + self.scale * q[0], self.oy - self.scale * q[1]

    def pair(self, p: PointLike) -> str:
        x, y = self(p)
        return f"{_f(x)},{_f(y)}"


def _ring_path(dom: PolygonalDomain, ring: Sequence[int], vp: _Viewport) -> str:
    pts = [vp.pair(dom.vertices[i]) for i in ring]
    return "M" + " L".join(pts) + " Z"


def _layer_domain(dom, overlays, style, vp) -> List[str]:
    out = []
    for k, ring in enumerate(dom.rings):
        fill = style.domain_fill if k == 0 else style.hole_fill
        cls = "outer" if k == 0 else "hole"
        out.append(
            f'<path class="{cls}" d="{_ring_path(dom, ring, vp)}" fill="{fill}" '
            f'stroke="{style.stroke}" stroke-width="{_f(style.stroke_width)}"/>'
        )
    return out


def _layer_heatmap(dom, overlays, style, vp) -> List[str]:
    if overlays.heat_points is None or overlays.heat_values is None or not len(overlays.heat_values):
        return []
    vals = np.asarray(overlays.heat_values, dtype=float)
    lo, hi = float(vals.min()), float(vals.max())
    span = hi - lo if hi > lo else 1.0
    side = overlays.heat_cell * vp.scale
    out = []
    for p, v in zip(overlays.heat_points, vals):
        x, y = vp(p)
        level = int(round(255 * (1.0 - (v - lo) / span)))
        out.append(
            f'<rect class="cell" x="{_f(x - side / 2)}" y="{_f(y - side / 2)}" width="{_f(side)}" '
            f'height="{_f(side)}" fill="rgb(255,{level},{level})"/>'
        )
    return out


def _layer_graph(dom, overlays, style, vp) -> List[str]:
    if overlays.graph is None:
        return []
    ii, jj = np.nonzero(np.triu(overlays.graph.adjacency))
    out = []
    for i, j in zip(ii.tolist(), jj.tolist()):
        (x1, y1), (x2, y2) = vp(dom.vertices[i]), vp(dom.vertices[j])
        out.append(
            f'<line class="visibility" x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="#6a8fd8" stroke-width="{_f(style.stroke_width / 3)}"/>'
        )
    return out


def _layer_paths(dom, overlays, style, vp) -> List[str]:
    return [
        f'<polyline class="path" points="{" ".join(vp.pair(p) for p in path)}" fill="none" '
        f'stroke="#c0392b" stroke-width="{_f(style.stroke_width)}"/>'
        for path in overlays.paths
    ]


def _wedge(center: PointLike, start: float, size: float, radius: float, vp: _Viewport) -> str:
    c = xy(center)
    a = c + radius * np.array([math.cos(start), math.sin(start)])
    b = c + radius * np.array([math.cos(start + size), math.sin(start + size)])
    r = radius * vp.scale
    large = 1 if size > math.pi else 0
    # sweep flag 0: counterclockwise in world coordinates once y is flipped
    return f"M{vp.pair(c)} L{vp.pair(a)} A{_f(r)},{_f(r)} 0 {large} 0 {vp.pair(b)} Z"


def _layer_fans(dom, overlays, style, vp) -> List[str]:
    radius = style.fan_radius * vp.world_size
    out = []
    for center, rng in overlays.fans:
        if rng.full:
            x, y = vp(center)
            out.append(f'<circle class="fan" cx="{_f(x)}" cy="{_f(y)}" r="{_f(radius * vp.scale)}" fill="#2e86c1" fill-opacity="0.3"/>')
            continue
        if not rng.intervals:
            x, y = vp(center)
            out.append(f'<circle class="fan-empty" cx="{_f(x)}" cy="{_f(y)}" r="{_f(3.0)}" fill="none" stroke="#2e86c1"/>')
            continue
        for iv in rng.intervals:
            out.append(
                f'<path class="fan" d="{_wedge(center, iv.start, iv.size, radius, vp)}" '
                f'fill="#2e86c1" fill-opacity="0.3"/>'
            )
    return out


def _layer_candidates(dom, overlays, style, vp) -> List[str]:
    out = []
    for p in overlays.candidates:
        x, y = vp(p)
        out.append(f'<circle class="candidate" cx="{_f(x)}" cy="{_f(y)}" r="2.000000" fill="#7d3c98"/>')
    return out


def _layer_centers(dom, overlays, style, vp) -> List[str]:
    out = []
    for p in overlays.centers:
        x, y = vp(p)
        out.append(f'<circle class="center" cx="{_f(x)}" cy="{_f(y)}" r="5.000000" fill="#111111"/>')
    return out


_LAYERS = {
    "domain": _layer_domain,
    "grid-heatmap": _layer_heatmap,
    "visibility-graph": _layer_graph,
    "paths": _layer_paths,
    "pirange-fans": _layer_fans,
    "candidates": _layer_candidates,
    "centers": _layer_centers,
}


def render_svg(dom: PolygonalDomain, overlays: Optional[Overlays] = None, style: Optional[RenderSpec] = None) -> str:
    overlays = overlays or Overlays()
    style = style or RenderSpec.from_settings()
    unknown = sorted(set(style.layers) - set(LAYER_ORDER))
    if unknown:
        raise ValueError(f"unknown layers: {', '.join(unknown)}")
    vp = _Viewport(dom, style)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{style.width}" height="{style.height}" '
        f'viewBox="0 0 {style.width} {style.height}">',
    ]
    for name in LAYER_ORDER:
        if name not in style.layers:
            continue
        lines.append(f'<g id="{name}">')
        lines.extend(_LAYERS[name](dom, overlays, style, vp))
        lines.append("</g>")
    lines.append("</svg>")
    logger.debug("🖼️ Rendered layers %s", ",".join(n for n in LAYER_ORDER if n in style.layers))
    return "\n".join(lines) + "\n"
