"""
🖥️ GEOCENTER COMMAND LINE
One subcommand per library operation, JSON on stdout, diagnostics on stderr.

Usage:
    geocenter validate --domain d1.json
    geocenter dist --instance D1 --from 2,5 --to 8,5
    geocenter center --instance D3 --force --out d3.svg
    geocenter render --instance D2 --layers domain,centers --out d2.svg

Exit codes: 0 success, 1 usage, 2 validation, 3 computation.
"""

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from .candidates import (
    SPECIAL_E,
    SPECIAL_I,
    VERTEX,
    CandidatePoint,
    build_context,
    dedupe,
    degenerate_candidates,
    general_candidates,
    special_candidates,
)
from .center import SolveOptions, brute_force_center, grid_points, oracle_samples, sampled_dmax, solve
from .config import configure_logging, get_settings, load_settings, set_settings
from .domain import LocationKind, PolygonalDomain, check_general_position, classify, jitter_domain, load_domain
from .errors import GeocenterError, OutsideDomain, ParseError
from .farthest import dmax_and_farthest
from .geodesic import SourceField, all_shortest_paths, distance, vertex_visibility
from .geom_core import Point, xy
from .instances import INSTANCES, get_instance
from .pirange import admissible_range, farthest_range, pirange_for
from .render import LAYER_ORDER, Overlays, RenderSpec, render_svg
from .visibility import VisibilityGraph, build_visibility_graph

logger = logging.getLogger("geocenter")

EXIT_USAGE = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


def _point(text: str) -> Tuple[float, float]:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y but got {text!r}") from None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise argparse.ArgumentTypeError(f"non-finite coordinate in {text!r}")
    return x, y


def _spacing(text: str) -> float:
    try:
        h = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number but got {text!r}") from None
    if not (math.isfinite(h) and h > 0.0):
        raise argparse.ArgumentTypeError(f"grid spacing must be positive and finite, got {text!r}")
    return h


# --------------------------------------------------------------------------
# JSON with 17 significant digits
# --------------------------------------------------------------------------


def to_json_text(obj: Any) -> str:
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return format(x, ".17g") if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Point):
        return to_json_text([obj.x, obj.y])
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{to_json_text(str(k))}: {to_json_text(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(to_json_text(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(payload: Any) -> None:
    print(to_json_text(payload))


# --------------------------------------------------------------------------
# argument handling
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geocenter", description="Geodesic centers of polygonal domains with holes")
    sub = parser.add_subparsers(dest="command", required=True)

    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--domain", help="domain JSON file")
    src.add_argument("--instance", choices=sorted(INSTANCES), help="named built-in domain")
    common.add_argument("--config", help="YAML config file")
    common.add_argument("--seed", type=int, help="jitter the domain with this seed")
    common.add_argument("--out", help="write an SVG rendering here")
    common.add_argument("--threads", type=int, help="worker threads")

    sub.add_parser("validate", parents=[common], help="validate a domain and report general position")

    for name, text in (("dist", "geodesic distance"), ("paths", "every shortest path")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--from", dest="src", type=_point, required=True)
        p.add_argument("--to", dest="dst", type=_point, required=True)
        p.add_argument("--rel-tol", type=float)

    p = sub.add_parser("farthest", parents=[common], help="d_max and the farthest points of s")
    p.add_argument("--s", type=_point, required=True)

    for name, text in (("pirange", "closed-form pi-range of (s, t)"), ("admissible", "admissible range R(s, t)")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--s", type=_point, required=True)
        p.add_argument("--t", type=_point, required=True)

    p = sub.add_parser("candidates", parents=[common], help="candidate points, optionally one case")
    p.add_argument("--case", help="case tag, e.g. special-E, vertex or G-(0,0,3)")
    p.add_argument("--force", action="store_true", help="proceed without general position")

    p = sub.add_parser("center", parents=[common], help="geodesic centers")
    p.add_argument("--force", action="store_true", help="proceed without general position")

    p = sub.add_parser("oracle", parents=[common], help="brute-force grid center")
    p.add_argument("--grid", type=_spacing, help="grid spacing")

    p = sub.add_parser("render", parents=[common], help="SVG rendering")
    p.add_argument("--layers", default="domain", help=f"comma separated, from {','.join(LAYER_ORDER)}")
    p.add_argument("--from", dest="src", type=_point)
    p.add_argument("--to", dest="dst", type=_point)
    p.add_argument("--s", type=_point)
    p.add_argument("--grid", type=_spacing)
    p.add_argument("--force", action="store_true")
    return parser


def _load(args: argparse.Namespace) -> PolygonalDomain:
    tolerances = get_settings().tolerances
    if args.instance:
        dom = get_instance(args.instance, tolerances)
    else:
        path = Path(args.domain)
        try:
            text = path.read_text()
        except OSError as e:
            raise ParseError(f"cannot read {path}: {e}") from e
        dom = load_domain(text, tolerances)
    if args.seed is not None:
        dom = jitter_domain(dom, args.seed)
    return dom


def _inside(dom: PolygonalDomain, p: Tuple[float, float], what: str) -> np.ndarray:
    if classify(dom, p).kind is LocationKind.OUTSIDE:
        raise OutsideDomain(f"{what} {p} is outside the domain")
    return xy(p)


def _write_svg(args: argparse.Namespace, dom: PolygonalDomain, overlays: Overlays, layers: Sequence[str]) -> None:
    if not args.out:
        return
    svg = render_svg(dom, overlays, RenderSpec.from_settings(layers))
    Path(args.out).write_text(svg)
    logger.info("🖼️ Wrote %s", args.out)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_validate(args, dom, graph):
    report = check_general_position(dom, graph)
    _write_svg(args, dom, Overlays(graph=graph), ("domain", "visibility-graph"))
    return {
        "valid": True,
        "n": dom.n,
        "holes": dom.h,
        "visibility_edges": graph.edge_count,
        "general_position": report.to_json(),
    }


def cmd_dist(args, dom, graph):
    s, t = _inside(dom, args.src, "--from"), _inside(dom, args.dst, "--to")
    d = distance(dom, graph, s, t)
    paths = all_shortest_paths(dom, graph, s, t, rel_tol=args.rel_tol)
    _write_svg(args, dom, Overlays(paths=[p.waypoints for p in paths]), ("domain", "paths"))
    return {"distance": d, "paths": len(paths)}


def cmd_paths(args, dom, graph):
    s, t = _inside(dom, args.src, "--from"), _inside(dom, args.dst, "--to")
    paths = all_shortest_paths(dom, graph, s, t, rel_tol=args.rel_tol)
    _write_svg(args, dom, Overlays(paths=[p.waypoints for p in paths]), ("domain", "paths"))
    return {"distance": paths[0].length if paths else None, "paths": [p.to_json() for p in paths]}


def cmd_farthest(args, dom, graph):
    s = _inside(dom, args.s, "--s")
    report = dmax_and_farthest(dom, graph, s)
    _write_svg(args, dom, Overlays(candidates=[f.point for f in report.farthest], centers=[s]), ("domain", "candidates", "centers"))
    return report.to_json()


def _pirange_of(dom, graph, s, t):
    field = SourceField.build(dom, graph, s)
    _, pivots, direct = field.couples(t, vertex_visibility(dom, t)[0])
    return pirange_for(dom, s, t, classify(dom, t), pivots, direct)


def cmd_pirange(args, dom, graph):
    s, t = _inside(dom, args.s, "--s"), _inside(dom, args.t, "--t")
    res = _pirange_of(dom, graph, s, t)
    _write_svg(args, dom, Overlays(fans=[(s, res.range)]), ("domain", "pirange-fans"))
    return res.to_json()


def cmd_admissible(args, dom, graph):
    s, t = _inside(dom, args.s, "--s"), _inside(dom, args.t, "--t")
    rng = admissible_range(dom, graph, s, t)
    _write_svg(args, dom, Overlays(fans=[(s, rng)]), ("domain", "pirange-fans"))
    return {"range": rng.to_json()}


def _collect_candidates(dom, graph, case: Optional[str], force: bool) -> List[CandidatePoint]:
    settings = get_settings()
    if case in (SPECIAL_E, SPECIAL_I):
        found = special_candidates(dom, graph, force=force, settings=settings)
        return [c for c in found if c.case_tag == case]
    if case is not None and (case == VERTEX or case.startswith("D-")):
        found = degenerate_candidates(dom, graph, force=force, settings=settings)
        return [c for c in found if c.case_tag == case]
    if case is not None:
        return general_candidates(dom, graph, case=case, force=force, settings=settings)
    ctx = build_context(dom, graph, settings)
    found = special_candidates(dom, graph, context=ctx, force=force, settings=settings)
    found += general_candidates(dom, graph, context=ctx, force=force, settings=settings)
    found += degenerate_candidates(dom, graph, context=ctx, force=force, settings=settings)
    return dedupe(found, dom.eps)


def cmd_candidates(args, dom, graph):
    found = _collect_candidates(dom, graph, args.case, args.force)
    _write_svg(args, dom, Overlays(candidates=[c.point for c in found]), ("domain", "candidates"))
    return {"count": len(found), "candidates": [c.to_json() for c in found]}


def cmd_center(args, dom, graph):
    result = solve(dom, graph, SolveOptions(force=args.force, threads=args.threads))
    _write_svg(args, dom, Overlays(centers=result.centers), ("domain", "centers"))
    return result.to_json()


def cmd_oracle(args, dom, graph):
    h = args.grid if args.grid is not None else get_settings().oracle.default_grid
    res = brute_force_center(dom, graph, h, threads=args.threads)
    _write_svg(args, dom, Overlays(centers=[res.point]), ("domain", "centers"))
    out = res.to_json()
    out["bracket"] = [res.value - res.bound, res.value]
    return out


def cmd_render(args, dom, graph):
    layers = [name.strip() for name in args.layers.split(",") if name.strip()]
    unknown = [name for name in layers if name not in LAYER_ORDER]
    if unknown:
        raise UsageError(f"unknown layers: {', '.join(unknown)}")
    overlays = Overlays(graph=graph)
    if "paths" in layers:
        if args.src is None or args.dst is None:
            raise UsageError("the paths layer needs --from and --to")
        s, t = _inside(dom, args.src, "--from"), _inside(dom, args.dst, "--to")
        overlays.paths = [p.waypoints for p in all_shortest_paths(dom, graph, s, t)]
    if "pirange-fans" in layers:
        if args.s is None:
            raise UsageError("the pirange-fans layer needs --s")
        s = _inside(dom, args.s, "--s")
        report = dmax_and_farthest(dom, graph, s)
        overlays.fans = [(s, farthest_range(dom, s, fp)) for fp in report.farthest]
    if "candidates" in layers:
        overlays.candidates = [c.point for c in _collect_candidates(dom, graph, None, args.force)]
    if "centers" in layers:
        overlays.centers = solve(dom, graph, SolveOptions(force=args.force, threads=args.threads)).centers
    if "grid-heatmap" in layers:
        h = args.grid if args.grid is not None else get_settings().oracle.default_grid
        pts = grid_points(dom, h)
        samples = oracle_samples(dom, h)
        overlays.heat_points = pts
        overlays.heat_values = sampled_dmax(dom, graph, pts, samples, vertex_visibility(dom, samples))
        overlays.heat_cell = h
    svg = render_svg(dom, overlays, RenderSpec.from_settings(layers))
    if args.out:
        Path(args.out).write_text(svg)
        return {"out": args.out, "layers": [n for n in LAYER_ORDER if n in layers]}
    sys.stdout.write(svg)
    return None


COMMANDS = {
    "validate": cmd_validate,
    "dist": cmd_dist,
    "paths": cmd_paths,
    "farthest": cmd_farthest,
    "pirange": cmd_pirange,
    "admissible": cmd_admissible,
    "candidates": cmd_candidates,
    "center": cmd_center,
    "oracle": cmd_oracle,
    "render": cmd_render,
}


def cmd_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"geocenter: error: {e}\n")
        return EXIT_USAGE

    try:
        if args.config:
            set_settings(load_settings(args.config))
        configure_logging()
        dom = _load(args)
        graph: VisibilityGraph = build_visibility_graph(dom)
        payload = COMMANDS[args.command](args, dom, graph)
    except UsageError as e:
        sys.stderr.write(f"geocenter: error: {e}\n")
        return EXIT_USAGE
    except (OSError, yaml.YAMLError) as e:
        logger.error("❌ %s", e)
        return ParseError.exit_code
    except GeocenterError as e:
        logger.error("❌ %s: %s", type(e).__name__, e)
        return e.exit_code
    if payload is not None:
        _emit(payload)
    return 0


def main() -> None:
    sys.exit(cmd_dispatch())


if __name__ == "__main__":
    main()
