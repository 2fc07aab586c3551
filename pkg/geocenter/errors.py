"""
❌ GEOCENTER ERRORS
Single exception hierarchy for the library. Each class carries the process exit
code the CLI reports when it escapes to the top level:

- 1: usage errors (argparse handles those itself)
- 2: validation errors (bad input documents, points outside the domain)
- 3: computation errors (everything numeric)
"""

from typing import Any, Optional


class GeocenterError(Exception):
    """Base class for every error raised by geocenter"""

    exit_code = 3


class ParseError(GeocenterError):
    """Input document is not the expected JSON shape"""

    exit_code = 2


class ValidationError(GeocenterError):
    """Domain rings are self-intersecting, overlapping or otherwise invalid"""

    exit_code = 2


class OutsideDomain(GeocenterError):
    """A query point lies outside the polygonal domain"""

    exit_code = 2


class GeneralPositionViolated(GeocenterError):
    """A generator that needs general position was run on a dirty domain"""

    exit_code = 2


class DegenerateInput(GeocenterError):
    """Coincident points where distinct ones are required"""


class PreconditionViolated(GeocenterError):
    """Angles or point sets outside the ranges an operation accepts"""


class NotCanonical(GeocenterError):
    """No relabeling puts the t-pivots clockwise and the s-pivots counterclockwise"""


class DegenerateFarthest(GeocenterError):
    """The shortest-path multiset does not match the farthest point's location class"""


class NotApplicable(GeocenterError):
    """The necessary condition was asked for a point with a degenerate farthest point"""


class PathExplosion(GeocenterError):
    """More tied shortest paths than the configured cap"""


class NoConvergence(GeocenterError):
    """Every Newton seed failed for an equidistance solve"""


class CombinatorialBudgetExceeded(GeocenterError):
    """Tuple enumeration went past the configured budget"""


class NoProgress(GeocenterError):
    """Local refinement hit max_iter before converging"""

    def __init__(self, message: str, point: Optional[Any] = None):
        super().__init__(message)
        self.point = point
