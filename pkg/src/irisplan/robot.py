"""Planar serial manipulator: kinematics, collision checks, joint-space metric, sensing.

Configurations are numpy vectors of joint angles wrapped into ``[-pi, pi)``.
Link ``i`` points along the cumulative angle ``q[0] + ... + q[i]``; the sensor
sits on the tip of the last link looking along it. Self-collision is not
checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bitset import CoverageSet
from .scenario import Segment, SensorParams, SensorPose, Workspace2D, clip_hits, visible_poi

TWO_PI = 2 * math.pi


def wrap_angles(q) -> np.ndarray:
    """Map angles into ``[-pi, pi)``."""
    q = np.mod(np.asarray(q, dtype=float) + math.pi, TWO_PI) - math.pi
    # fmod rounding can land exactly on +pi
    return np.where(q >= math.pi, q - TWO_PI, q)


def as_configuration(q, dof: int | None = None) -> np.ndarray:
    q = wrap_angles(q)
    if q.ndim != 1 or (dof is not None and len(q) != dof):
        raise ValueError(f"expected a {dof}-dimensional configuration, got shape {q.shape}")
    return q


@dataclass(frozen=True)
class RobotModel:
    base: tuple[float, float] = (0.0, 0.0)
    link_lengths: tuple[float, ...] = (1.0,) * 5
    sensor: SensorParams = field(default_factory=SensorParams)

    def __post_init__(self):
        object.__setattr__(self, "link_lengths", tuple(float(x) for x in self.link_lengths))
        object.__setattr__(self, "base", (float(self.base[0]), float(self.base[1])))
        if not self.link_lengths or min(self.link_lengths) <= 0:
            raise ValueError("link lengths must be strictly positive")

    @property
    def dof(self) -> int:
        return len(self.link_lengths)


def joint_positions(m: RobotModel, q: np.ndarray) -> np.ndarray:
    """Joint and tip positions for one or many configurations.

    Returns shape ``(..., dof + 1, 2)``; index 0 is the base, index ``dof`` the tip.
    """
    q = np.asarray(q, dtype=float)
    theta = np.cumsum(q, axis=-1)
    lengths = np.asarray(m.link_lengths)
    steps = np.stack([lengths * np.cos(theta), lengths * np.sin(theta)], axis=-1)
    base = np.broadcast_to(np.asarray(m.base), steps.shape[:-2] + (1, 2))
    return np.concatenate([base, base + np.cumsum(steps, axis=-2)], axis=-2)


def forward_kinematics(m: RobotModel, q) -> tuple[list[Segment], SensorPose]:
    """Link segments (base to tip) and the tip sensor pose."""
    q = np.asarray(q, dtype=float)
    pts = joint_positions(m, q)
    links = [(tuple(pts[i]), tuple(pts[i + 1])) for i in range(m.dof)]
    heading = float(np.sum(q))
    pose = SensorPose(
        origin=tuple(pts[-1]),
        direction=(math.cos(heading), math.sin(heading)),
        fov_half_angle=m.sensor.fov_half_angle,
        range=m.sensor.range,
    )
    return links, pose


def configs_collision_free(m: RobotModel, qs: np.ndarray, w: Workspace2D) -> np.ndarray:
    """Vectorised collision test over configurations of shape ``(n, dof)``."""
    pts = joint_positions(m, np.atleast_2d(qs))
    b = w.bounds
    inside = (
        (pts[..., 0] >= b.xmin) & (pts[..., 0] <= b.xmax) & (pts[..., 1] >= b.ymin) & (pts[..., 1] <= b.ymax)
    ).all(axis=-1)
    if len(w.rect_array) == 0:
        return inside
    hits = clip_hits(pts[:, :-1], pts[:, 1:], w.rect_array).any(axis=(-1, -2))
    return inside & ~hits


def config_collision_free(m: RobotModel, q, w: Workspace2D) -> bool:
    return bool(configs_collision_free(m, np.asarray(q, dtype=float)[None, :], w)[0])


def angular_difference(q_a, q_b) -> np.ndarray:
    """Per-joint signed shortest rotation taking ``q_a`` to ``q_b``."""
    return wrap_angles(np.asarray(q_b, dtype=float) - np.asarray(q_a, dtype=float))


def _joint_gaps(q_a, q_b) -> np.ndarray:
    # |a - b| is bitwise symmetric, which keeps distance(a, b) == distance(b, a) exactly.
    gap = np.abs(np.asarray(q_a, dtype=float) - np.asarray(q_b, dtype=float))
    gap = np.mod(gap, TWO_PI)
    return np.minimum(gap, TWO_PI - gap)


def distance(q_a, q_b) -> float:
    """Euclidean norm of the per-joint shortest angular gaps."""
    return float(distances(q_a, np.asarray(q_b, dtype=float)[None, :])[0])


def distances(q, qs: np.ndarray) -> np.ndarray:
    """Distance from ``q`` to each row of ``qs``."""
    g = _joint_gaps(q, qs)
    return np.sqrt(np.sum(g * g, axis=-1))


def interpolation_steps(q_a, q_b, resolution: float) -> int:
    """Number of equal sub-steps (a power of two) so that each is at most ``resolution``.

    Using powers of two makes the sample sets nested as ``resolution`` halves,
    so a finer check never accepts an edge a coarser one rejected.
    """
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    span = float(np.max(np.abs(angular_difference(q_a, q_b)), initial=0.0))
    n = 1
    while span / n > resolution:
        n *= 2
    return n


def interpolate(q_a, q_b, n: int) -> np.ndarray:
    """``n + 1`` configurations from ``q_a`` to ``q_b`` inclusive."""
    t = np.linspace(0.0, 1.0, n + 1)[:, None]
    return wrap_angles(np.asarray(q_a, dtype=float) + t * angular_difference(q_a, q_b))


def edge_collision_free(m: RobotModel, q_a, q_b, w: Workspace2D, resolution: float = 0.05) -> bool:
    """Check the straight joint-space motion between two configurations.

    Consecutive samples differ by at most ``resolution`` in max-norm; both
    endpoints are included.
    """
    n = interpolation_steps(q_a, q_b, resolution)
    return bool(configs_collision_free(m, interpolate(q_a, q_b, n), w).all())


def sense(m: RobotModel, q, w: Workspace2D) -> CoverageSet:
    """POI visible from the tip sensor, regardless of collision status."""
    _, pose = forward_kinematics(m, q)
    return visible_poi(pose, w)


def sample_configurations(rng: np.random.Generator, n: int, dof: int) -> np.ndarray:
    return rng.uniform(-math.pi, math.pi, size=(n, dof))


def steer(q_from: np.ndarray, q_to: np.ndarray, step: float) -> np.ndarray:
    """Move from ``q_from`` toward ``q_to`` by at most ``step`` in max-norm."""
    diff = angular_difference(q_from, q_to)
    span = float(np.max(np.abs(diff)))
    if span > step:
        diff = diff * (step / span)
    return wrap_angles(q_from + diff)

