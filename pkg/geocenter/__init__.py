"""
🎯 geocenter
Geodesic centers of polygonal domains with holes.

Usage:
    from geocenter import build_visibility_graph, get_instance, solve, SolveOptions

    dom = get_instance("D1")
    graph = build_visibility_graph(dom)
    result = solve(dom, graph, SolveOptions(force=True))
"""

from .center import CenterResult, SolveOptions, brute_force_center, local_refine, solve
from .domain import PolygonalDomain, build_domain, classify, emit_domain, load_domain
from .errors import GeocenterError
from .farthest import dmax_and_farthest
from .geodesic import all_shortest_paths, distance
from .instances import get_instance
from .visibility import build_visibility_graph, visible

__version__ = "0.1.0"

__all__ = [
    "CenterResult",
    "GeocenterError",
    "PolygonalDomain",
    "SolveOptions",
    "all_shortest_paths",
    "brute_force_center",
    "build_domain",
    "build_visibility_graph",
    "classify",
    "distance",
    "dmax_and_farthest",
    "emit_domain",
    "get_instance",
    "load_domain",
    "local_refine",
    "solve",
    "visible",
]
