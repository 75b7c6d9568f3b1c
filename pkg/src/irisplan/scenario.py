"""Planar workspace, rectangular obstacles, points of interest and visibility.

Points are plain ``(x, y)`` tuples or numpy arrays. Rectangles are
axis-aligned and closed. The scalar predicates (:func:`segments_intersect`,
:func:`segment_hits_rectangle`) use orientation tests; the batched clipping
routine used on the hot path (:func:`clip_hits`) is a Liang-Barsky slab test.
The two are cross-checked in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bitset import CoverageSet

Point = tuple[float, float]
Segment = tuple[Point, Point]


@dataclass(frozen=True)
class Rect:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin <= self.xmax and self.ymin <= self.ymax):
            raise ValueError(f"degenerate rectangle {self}")

    def contains(self, p: Sequence[float]) -> bool:
        return self.xmin <= p[0] <= self.xmax and self.ymin <= p[1] <= self.ymax

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.xmin, self.ymin, self.xmax, self.ymax)


@dataclass(frozen=True)
class SensorParams:
    """Field-of-view cone of the tip-mounted sensor."""

    fov_half_angle: float = math.pi / 4
    range: float = 5.0

    def __post_init__(self):
        if not 0 < self.fov_half_angle <= math.pi:
            raise ValueError("fov_half_angle must lie in (0, pi]")
        if not self.range > 0:
            raise ValueError("range must be positive")


@dataclass(frozen=True)
class SensorPose:
    origin: Point
    direction: Point
    fov_half_angle: float
    range: float

    def __post_init__(self):
        norm = math.hypot(*self.direction)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"sensor direction must be a unit vector, got norm {norm}")
        SensorParams(self.fov_half_angle, self.range)


@dataclass(frozen=True, eq=False)
class Workspace2D:
    """Square workspace with obstacles and an ordered list of POI.

    Parameters
    ----------
    side : float
        Side length of the square bounds.
    obstacles : sequence of Rect
    poi : array_like, shape (k, 2)
        Points of interest. Index ``i`` is bit ``i`` of every coverage set.
    center : (float, float)
        Center of the square; defaults to the origin.
    """

    side: float
    obstacles: tuple[Rect, ...]
    poi: np.ndarray
    center: Point = (0.0, 0.0)
    _rects: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError("bounds side must be positive")
        obstacles = tuple(o if isinstance(o, Rect) else Rect(*o) for o in self.obstacles)
        object.__setattr__(self, "obstacles", obstacles)
        poi = np.asarray(self.poi, dtype=float).reshape(-1, 2)
        poi.setflags(write=False)
        object.__setattr__(self, "poi", poi)
        if len(poi) == 0:
            raise ValueError("workspace needs at least one point of interest")
        b = self.bounds
        for o in obstacles:
            if not (b.xmin <= o.xmin and o.xmax <= b.xmax and b.ymin <= o.ymin and o.ymax <= b.ymax):
                raise ValueError(f"obstacle {o} lies outside the workspace bounds")
        for p in poi:
            if not b.contains(p):
                raise ValueError(f"point of interest {tuple(p)} lies outside the workspace bounds")
        rects = np.array([o.as_tuple() for o in obstacles], dtype=float).reshape(-1, 4)
        rects.setflags(write=False)
        object.__setattr__(self, "_rects", rects)

    @property
    def bounds(self) -> Rect:
        h = self.side / 2
        cx, cy = self.center
        return Rect(cx - h, cy - h, cx + h, cy + h)

    @property
    def n_poi(self) -> int:
        return len(self.poi)

    @property
    def rect_array(self) -> np.ndarray:
        """Obstacles as an ``(m, 4)`` array of ``xmin, ymin, xmax, ymax``."""
        return self._rects

    def without_obstacle(self, index: int) -> "Workspace2D":
        obstacles = self.obstacles[:index] + self.obstacles[index + 1 :]
        return Workspace2D(self.side, obstacles, self.poi, self.center)


def square_boundary_poi(side: float, count: int, center: Point = (0.0, 0.0)) -> np.ndarray:
    """Sample ``count`` points uniformly by arc length along the square's boundary.

    Walks counter-clockwise from the lower-left corner; the first point is the
    corner itself.
    """
    if count < 1:
        raise ValueError("poi count must be at least 1")
    h = side / 2
    cx, cy = center
    s = np.arange(count) * (4 * side / count)
    edge = np.minimum((s // side).astype(int), 3)
    t = s - edge * side
    x = np.select([edge == 0, edge == 1, edge == 2, edge == 3], [-h + t, h + 0 * t, h - t, -h + 0 * t])
    y = np.select([edge == 0, edge == 1, edge == 2, edge == 3], [-h + 0 * t, -h + t, h + 0 * t, h - t])
    return np.column_stack([x + cx, y + cy])


def _orient(a: Point, b: Point, c: Point) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return int(v > 0) - int(v < 0)


def _on_segment(a: Point, b: Point, c: Point) -> bool:
    # c is collinear with a-b; is it inside the bounding box?
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])


def segments_intersect(s: Segment, t: Segment) -> bool:
    """True iff the closed segments share at least one point.

    Collinear overlap and touching endpoints count as intersections;
    zero-length segments behave as points.
    """
    p1, p2 = s
    q1, q2 = t
    o1 = _orient(p1, p2, q1)
    o2 = _orient(p1, p2, q2)
    o3 = _orient(q1, q2, p1)
    o4 = _orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    return (
        (o1 == 0 and _on_segment(p1, p2, q1))
        or (o2 == 0 and _on_segment(p1, p2, q2))
        or (o3 == 0 and _on_segment(q1, q2, p1))
        or (o4 == 0 and _on_segment(q1, q2, p2))
    )


def segment_hits_rectangle(s: Segment, r: Rect) -> bool:
    """True iff segment ``s`` touches the closed rectangle ``r``."""
    if r.contains(s[0]) or r.contains(s[1]):
        return True
    c00 = (r.xmin, r.ymin)
    c10 = (r.xmax, r.ymin)
    c11 = (r.xmax, r.ymax)
    c01 = (r.xmin, r.ymax)
    return any(segments_intersect(s, e) for e in ((c00, c10), (c10, c11), (c11, c01), (c01, c00)))


def clip_hits(p0: np.ndarray, p1: np.ndarray, rects: np.ndarray, open_segment: bool = False) -> np.ndarray:
    """Batched segment/rectangle intersection by slab clipping.

    Parameters
    ----------
    p0, p1 : ndarray, shape (..., 2)
        Segment endpoints; leading dimensions broadcast against each other.
    rects : ndarray, shape (m, 4)
    open_segment : bool
        Exclude the two endpoints from the segment.

    Returns
    -------
    ndarray of bool, shape (..., m)
    """
    p0 = np.asarray(p0, dtype=float)[..., None, :]
    d = np.asarray(p1, dtype=float)[..., None, :] - p0
    lo = rects[:, :2]
    hi = rects[:, 2:]
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = (lo - p0) / d
        t2 = (hi - p0) / d
    parallel = d == 0
    inside = (lo <= p0) & (p0 <= hi)
    enter = np.where(parallel, np.where(inside, -np.inf, np.inf), np.minimum(t1, t2))
    leave = np.where(parallel, np.where(inside, np.inf, -np.inf), np.maximum(t1, t2))
    a = enter.max(axis=-1)
    b = leave.min(axis=-1)
    if open_segment:
        hit = (a <= b) & (a < 1) & (b > 0)
        # An open segment of zero length is empty.
        return hit & ~parallel.all(axis=-1)
    return (a <= b) & (a <= 1) & (b >= 0)


def _bits_from_mask(mask: np.ndarray) -> CoverageSet:
    if not mask.any():
        return 0
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def visible_mask(pose: SensorPose, w: Workspace2D) -> np.ndarray:
    """Boolean mask over ``w.poi`` of the points seen from ``pose``."""
    o = np.asarray(pose.origin, dtype=float)
    v = w.poi - o
    dist = np.hypot(v[:, 0], v[:, 1])
    dx, dy = pose.direction
    cross = dx * v[:, 1] - dy * v[:, 0]
    dot = dx * v[:, 0] + dy * v[:, 1]
    angle = np.arctan2(np.abs(cross), dot)
    ok = (dist <= pose.range) & (angle <= pose.fov_half_angle)
    if len(w.rect_array) and ok.any():
        idx = np.flatnonzero(ok)
        blocked = clip_hits(o, w.poi[idx], w.rect_array, open_segment=True).any(axis=-1)
        ok[idx[blocked]] = False
    return ok


def visible_poi(pose: SensorPose, w: Workspace2D) -> CoverageSet:
    """Indices of POI inside the sensor cone, within range, and unoccluded.

    The occlusion test uses the open segment from the sensor to the point, so a
    POI lying on an obstacle's boundary stays visible. The cone is closed.
    """
    return _bits_from_mask(visible_mask(pose, w))
