"""
📐 GEOM CORE
Planar primitives, angles normalized to [0, 2π) and direction-range arithmetic
on the circle.

A direction range is a union of disjoint circular intervals. Each interval
stores a canonical start in [0, 2π), a size in (0, 2π] and open/closed flags
for both ends. The all-directions range is a separate `full` flag and is never
stored as an interval of size 2π.

Usage:
    r = range_intersect([halfplane_range(0.0), halfplane_range(math.pi / 2)])
    r.contains(math.pi / 4)   # True
"""

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DegenerateInput

TWO_PI = 2.0 * math.pi

# angle tolerance used when callers do not pass their own
EPS_ANG = 1e-9
EPS_LEN = 1e-9


@dataclass(frozen=True)
class Point:
    """A finite point in the plane"""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DegenerateInput(f"non-finite coordinates ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    @classmethod
    def of(cls, p: "PointLike") -> "Point":
        if isinstance(p, Point):
            return p
        x, y = p
        return cls(float(x), float(y))


PointLike = Union[Point, Sequence[float], np.ndarray]

# radians, canonical representative in [0, 2π)
Angle = float


def xy(p: PointLike) -> np.ndarray:
    """Coordinates of any point-like value as a float array of shape (2,)"""
    if isinstance(p, Point):
        return np.array([p.x, p.y], dtype=float)
    return np.asarray(p, dtype=float).reshape(2)


def normalize_angle(value: float) -> Angle:
    a = math.fmod(value, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2π
    if a >= TWO_PI:
        a = 0.0
    return a


def wrap_pi(value: float) -> float:
    """Signed representative of an angle difference in (-π, π]"""
    a = normalize_angle(value)
    return a - TWO_PI if a > math.pi else a


def unit(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle)])


def distance(p: PointLike, q: PointLike) -> float:
    a, b = xy(p), xy(q)
    return float(math.hypot(b[0] - a[0], b[1] - a[1]))


def cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """z-component of the cross product, broadcasting over leading axes"""
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def angle_of(frm: PointLike, to: PointLike, eps_len: float = EPS_LEN) -> Angle:
    a, b = xy(frm), xy(to)
    dx, dy = b[0] - a[0], b[1] - a[1]
    if math.hypot(dx, dy) <= eps_len:
        raise DegenerateInput(f"angle_of between coincident points {tuple(a)} and {tuple(b)}")
    return normalize_angle(math.atan2(dy, dx))


def ccw_delta(a: Angle, b: Angle) -> float:
    """Counterclockwise sweep from direction a to direction b, in [0, 2π)"""
    return normalize_angle(b - a)


def segment_point_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from point p to each segment a[i]b[i]; a and b have shape (m, 2)"""
    d = b - a
    l2 = np.einsum("ij,ij->i", d, d)
    t = np.einsum("ij,ij->i", p - a, d) / np.where(l2 > 0.0, l2, 1.0)
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[:, None] * d
    return np.hypot(p[0] - proj[:, 0], p[1] - proj[:, 1])


# --------------------------------------------------------------------------
# circular intervals and direction ranges
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CircularInterval:
    start: Angle
    size: float
    start_open: bool = True
    end_open: bool = True

    @property
    def end(self) -> Angle:
        return normalize_angle(self.start + self.size)

    def contains(self, angle: float, margin: float = 0.0) -> bool:
        """Membership; a positive margin keeps away from both endpoints"""
        off = normalize_angle(angle - self.start)
        if margin > 0.0:
            return margin < off < self.size - margin
        if self.size >= TWO_PI and off == 0.0:
            return not (self.start_open and self.end_open)
        lo_ok = off > 0.0 or not self.start_open
        hi_ok = off < self.size or (off == self.size and not self.end_open)
        return lo_ok and hi_ok

    def boundary_distance(self, angle: float) -> float:
        """Angular distance from angle to the nearer endpoint"""
        off = normalize_angle(angle - self.start)
        to_start = min(off, TWO_PI - off)
        end_off = normalize_angle(angle - self.end)
        to_end = min(end_off, TWO_PI - end_off)
        return min(to_start, to_end)

    def midpoint(self) -> Angle:
        return normalize_angle(self.start + self.size / 2.0)


# (lo, hi, lo_open, hi_open) with 0 <= lo <= hi <= 2π
_Piece = Tuple[float, float, bool, bool]


def _to_pieces(iv: CircularInterval) -> List[_Piece]:
    s, e = iv.start, iv.start + iv.size
    if e <= TWO_PI:
        return [(s, e, iv.start_open, iv.end_open)]
    # wrapping interval: the cut at 0 is interior, so 0 belongs to the second piece
    return [(s, TWO_PI, iv.start_open, True), (0.0, e - TWO_PI, False, iv.end_open)]


def _intersect_pieces(a: _Piece, b: _Piece) -> Optional[_Piece]:
    if a[0] > b[0]:
        lo, lo_open = a[0], a[2]
    elif b[0] > a[0]:
        lo, lo_open = b[0], b[2]
    else:
        lo, lo_open = a[0], a[2] or b[2]
    if a[1] < b[1]:
        hi, hi_open = a[1], a[3]
    elif b[1] < a[1]:
        hi, hi_open = b[1], b[3]
    else:
        hi, hi_open = a[1], a[3] or b[3]
    if lo < hi or (lo == hi and not lo_open and not hi_open):
        return (lo, hi, lo_open, hi_open)
    return None


@dataclass(frozen=True)
class DirectionRange:
    intervals: Tuple[CircularInterval, ...] = ()
    full: bool = False

    # -- constructors ------------------------------------------------------

    @classmethod
    def everything(cls) -> "DirectionRange":
        return cls((), True)

    @classmethod
    def nothing(cls) -> "DirectionRange":
        return cls((), False)

    @classmethod
    def interval(
        cls, start: float, end: float, start_open: bool = True, end_open: bool = True
    ) -> "DirectionRange":
        """Interval swept counterclockwise from start to end"""
        size = end - start
        if size >= TWO_PI:
            return cls.everything()
        if size <= 0.0:
            size = normalize_angle(size)
            if size == 0.0:
                return cls.nothing()
        return cls((CircularInterval(normalize_angle(start), size, start_open, end_open),))

    @classmethod
    def from_pieces(cls, pieces: Iterable[_Piece], eps: float = 0.0) -> "DirectionRange":
        """Normalize linear pieces on [0, 2π] into merged circular intervals"""
        kept = sorted((p for p in pieces if p[1] - p[0] > eps), key=lambda p: (p[0], p[2]))
        merged: List[List] = []
        for lo, hi, lo_open, hi_open in kept:
            if merged:
                last = merged[-1]
                touching = lo < last[1] or (lo == last[1] and not (last[3] and lo_open))
                if touching:
                    if hi > last[1] or (hi == last[1] and not hi_open):
                        last[1], last[3] = hi, hi_open
                    continue
            merged.append([lo, hi, lo_open, hi_open])
        if not merged:
            return cls.nothing()
        first, last = merged[0], merged[-1]
        if len(merged) == 1 and first[0] == 0.0 and first[1] >= TWO_PI:
            if not first[2] or not first[3]:
                return cls.everything()
        if len(merged) > 1 and first[0] == 0.0 and last[1] >= TWO_PI and not (first[2] and last[3]):
            if first[1] >= last[0]:
                return cls.everything()
            glued = [last[0], first[1] + TWO_PI, last[2], first[3]]
            merged = [glued] + merged[1:-1]
        intervals = tuple(
            CircularInterval(normalize_angle(lo), hi - lo, lo_open, hi_open)
            for lo, hi, lo_open, hi_open in merged
        )
        return cls(intervals, False)

    # -- queries -----------------------------------------------------------

    @property
    def measure(self) -> float:
        if self.full:
            return TWO_PI
        return float(sum(iv.size for iv in self.intervals))

    def is_empty(self, eps: float = 0.0) -> bool:
        return not self.full and self.measure <= eps

    def contains(self, angle: float, margin: float = 0.0) -> bool:
        if self.full:
            return True
        return any(iv.contains(angle, margin) for iv in self.intervals)

    def boundary_distance(self, angle: float) -> float:
        if self.full:
            return math.inf
        if not self.intervals:
            return math.inf
        return min(iv.boundary_distance(angle) for iv in self.intervals)

    def midpoint_direction(self) -> Optional[Angle]:
        """Middle of the widest interval, or None for an empty range"""
        if self.full:
            return 0.0
        if not self.intervals:
            return None
        widest = max(self.intervals, key=lambda iv: iv.size)
        return widest.midpoint()

    def pieces(self) -> List[_Piece]:
        if self.full:
            return [(0.0, TWO_PI, False, True)]
        out: List[_Piece] = []
        for iv in self.intervals:
            out.extend(_to_pieces(iv))
        return out

    def intersect(self, other: "DirectionRange", eps: float = 0.0) -> "DirectionRange":
        return range_intersect([self, other], eps)

    def to_json(self):
        if self.full:
            return "full"
        if not self.intervals:
            return "empty"
        return [
            {
                "start": iv.start,
                "end": iv.end,
                "start_open": iv.start_open,
                "end_open": iv.end_open,
            }
            for iv in self.intervals
        ]


def range_intersect(ranges: Sequence[DirectionRange], eps: float = 0.0) -> DirectionRange:
    """Set intersection on the circle

    Slivers no wider than eps are dropped from the result.
    """
    current: Optional[List[_Piece]] = None
    for r in ranges:
        if r.full:
            continue
        pieces = r.pieces()
        if current is None:
            current = pieces
            continue
        nxt: List[_Piece] = []
        for a in current:
            for b in pieces:
                c = _intersect_pieces(a, b)
                if c is not None:
                    nxt.append(c)
        current = nxt
        if not current:
            return DirectionRange.nothing()
    if current is None:
        return DirectionRange.everything()
    return DirectionRange.from_pieces(current, eps)


def halfplane_range(bound_normal: float) -> DirectionRange:
    """Open range of size π around bound_normal"""
    return DirectionRange(
        (CircularInterval(normalize_angle(bound_normal - math.pi / 2.0), math.pi, True, True),)
    )


def closed_halfplane_range(start: float) -> DirectionRange:
    return DirectionRange((CircularInterval(normalize_angle(start), math.pi, False, False),))
