"""Incrementally grown RRT whose vertices implicitly define an RRG.

Tree edges are collision-checked when they are created. Every other pair of
vertices closer than the current connection radius is an RRG edge whose
collision status stays unknown until a caller marks it.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .bitset import CoverageSet, to_indices, from_indices
from .robot import (
    RobotModel,
    as_configuration,
    config_collision_free,
    configs_collision_free,
    distances,
    interpolate,
    interpolation_steps,
    sample_configurations,
    sense,
    steer,
)
from .scenario import Workspace2D


class EdgeStatus(enum.Enum):
    UNKNOWN = "unknown"
    FREE = "free"
    INVALID = "invalid"


class RoadmapGrowthError(RuntimeError):
    """No collision-free extension was found within the attempt cap."""


class InfeasibleStartError(ValueError):
    """The start configuration is in collision."""


class EdgeStatusError(RuntimeError):
    """An edge already known to be free (invalid) was marked invalid (free)."""


def radius_rule(n: int, d: int, gamma: float) -> float:
    """Connection radius ``gamma * (log n / n) ** (1 / d)``."""
    if n < 2:
        raise ValueError("radius_rule needs at least two vertices")
    return gamma * (math.log(n) / n) ** (1.0 / d)


class _NullClock:
    def charge(self, kind, count=1):
        pass


class Roadmap:
    """RRT rooted at the start configuration, read as an implicit RRG.

    Parameters
    ----------
    robot : RobotModel
    workspace : Workspace2D
    start : array_like
        Start configuration; becomes vertex 0.
    seed : int
        Seed of the sampling RNG.
    gamma : float
        Scale of the connection radius.
    step : float
        RRT steering step (joint max-norm, radians).
    resolution : float
        Edge collision-check resolution (joint max-norm, radians).
    max_attempts : int
        Failed extensions tolerated per inserted vertex before giving up.
    clock : optional
        Object with ``charge(kind, count)``; receives work accounting.
    """

    def __init__(
        self,
        robot: RobotModel,
        workspace: Workspace2D,
        start,
        *,
        seed: int = 0,
        gamma: float = 3.0,
        step: float = 0.5,
        resolution: float = 0.05,
        max_attempts: int = 1000,
        clock=None,
    ):
        self.robot = robot
        self.workspace = workspace
        self.seed = seed
        self.gamma = gamma
        self.step = step
        self.resolution = resolution
        self.max_attempts = max_attempts
        self.clock = clock if clock is not None else _NullClock()
        self.rng = np.random.default_rng(seed)

        q0 = as_configuration(start, robot.dof)
        if not config_collision_free(robot, q0, workspace):
            raise InfeasibleStartError("start configuration is in collision")
        self._configs = np.empty((64, robot.dof))
        self._n = 0
        self.parent: list[int] = []
        self.tree_length: list[float] = []
        self._children: list[list[int]] = []
        self._coverage: list[CoverageSet] = []
        self._status: dict[tuple[int, int], EdgeStatus] = {}
        self._adj: dict[int, list[tuple[int, float]]] = {}
        self.covered: CoverageSet = 0
        self.radius = 0.0
        self._insert(q0, -1, 0.0)

    # -- graph protocol used by the search and the oracle -----------------

    @property
    def n_vertices(self) -> int:
        return self._n

    def __len__(self) -> int:
        return self._n

    def coverage(self, v: int) -> CoverageSet:
        return self._coverage[v]

    def config(self, v: int) -> np.ndarray:
        return self._configs[v]

    @property
    def configs(self) -> np.ndarray:
        return self._configs[: self._n]

    def neighbors(self, v: int) -> list[tuple[int, float]]:
        """RRG neighbors of ``v`` as ``(u, length)`` pairs in vertex order.

        Includes every vertex within the current radius and every tree
        neighbor regardless of radius; invalid edges are left out.
        """
        adj = self._adj.get(v)
        if adj is None:
            d = distances(self._configs[v], self.configs)
            near = d <= self.radius
            near[v] = False
            if self.parent[v] >= 0:
                near[self.parent[v]] = True
            near[self._children[v]] = True
            adj = []
            for u in np.flatnonzero(near).tolist():
                if self._status.get(_key(u, v)) is EdgeStatus.INVALID:
                    continue
                adj.append((u, float(d[u])))
            self._adj[v] = adj
            self.clock.charge("nn_query", self._n)
        return adj

    def edge_length(self, u: int, v: int) -> float:
        for w, length in self.neighbors(u):
            if w == v:
                return length
        raise KeyError(f"({u}, {v}) is not an edge of the roadmap")

    # -- edge status ------------------------------------------------------

    def edge_status(self, u: int, v: int) -> EdgeStatus:
        return self._status.get(_key(u, v), EdgeStatus.UNKNOWN)

    def is_tree_edge(self, u: int, v: int) -> bool:
        return self.parent[u] == v or self.parent[v] == u

    def mark_edge(self, u: int, v: int, status: EdgeStatus) -> None:
        if status is EdgeStatus.UNKNOWN:
            raise ValueError("edges can only be marked free or invalid")
        key = _key(u, v)
        current = self._status.get(key, EdgeStatus.UNKNOWN)
        if current is not EdgeStatus.UNKNOWN and current is not status:
            raise EdgeStatusError(f"edge {key} is already {current.value}; cannot mark {status.value}")
        self._status[key] = status
        if status is EdgeStatus.INVALID:
            for a, b in ((u, v), (v, u)):
                if a in self._adj:
                    self._adj[a] = [(w, l) for w, l in self._adj[a] if w != b]

    def check_edge(self, u: int, v: int) -> bool:
        """Collision-check the straight motion between two vertices (no marking)."""
        qa, qb = self._configs[u], self._configs[v]
        n = interpolation_steps(qa, qb, self.resolution)
        self.clock.charge("edge_check")
        self.clock.charge("config_check", n + 1)
        return bool(configs_collision_free(self.robot, interpolate(qa, qb, n), self.workspace).all())

    def edges(self):
        """Known-status pairs as ``(u, v, status)`` sorted by vertex ids."""
        return [(u, v, s) for (u, v), s in sorted(self._status.items())]

    # -- growth -----------------------------------------------------------

    def add_vertex(self, q, parent: int) -> int:
        """Insert ``q`` as a tree child of ``parent`` after checking the edge.

        Raises ``ValueError`` if the tree edge is in collision.
        """
        q = as_configuration(q, self.robot.dof)
        n = interpolation_steps(self._configs[parent], q, self.resolution)
        self.clock.charge("edge_check")
        self.clock.charge("config_check", n + 1)
        if not configs_collision_free(self.robot, interpolate(self._configs[parent], q, n), self.workspace).all():
            raise ValueError("tree edge is in collision")
        v = self._insert(q, parent, float(distances(self._configs[parent], q[None, :])[0]))
        self._update_radius()
        return v

    def grow(self, batch: int = 10) -> list[int]:
        """Add ``batch`` collision-free vertices by RRT extension.

        Returns the new vertex ids. Raises :class:`RoadmapGrowthError` when
        ``max_attempts`` consecutive extensions fail.
        """
        if batch < 1:
            raise ValueError("batch must be at least 1")
        added = []
        dof = self.robot.dof
        for _ in range(batch):
            for _attempt in range(self.max_attempts):
                q_rand = sample_configurations(self.rng, 1, dof)[0]
                d = distances(q_rand, self.configs)
                self.clock.charge("nn_query", self._n)
                near = int(np.argmin(d))
                q_new = steer(self._configs[near], q_rand, self.step)
                n = interpolation_steps(self._configs[near], q_new, self.resolution)
                self.clock.charge("edge_check")
                self.clock.charge("config_check", n + 1)
                motion = interpolate(self._configs[near], q_new, n)
                if configs_collision_free(self.robot, motion, self.workspace).all():
                    length = float(distances(self._configs[near], q_new[None, :])[0])
                    added.append(self._insert(q_new, near, length))
                    break
            else:
                self._update_radius()
                raise RoadmapGrowthError(
                    f"no collision-free extension found in {self.max_attempts} attempts"
                )
        self._update_radius()
        return added

    def _insert(self, q: np.ndarray, parent: int, length: float) -> int:
        if self._n == len(self._configs):
            self._configs = np.concatenate([self._configs, np.empty_like(self._configs)])
        v = self._n
        self._configs[v] = q
        self._n += 1
        self.parent.append(parent)
        self.tree_length.append(length)
        self._children.append([])
        cov = sense(self.robot, q, self.workspace)
        self.clock.charge("sense")
        self._coverage.append(cov)
        self.covered |= cov
        if parent >= 0:
            self._children[parent].append(v)
            self._status[_key(parent, v)] = EdgeStatus.FREE
        return v

    def _update_radius(self) -> None:
        if self._n >= 2:
            self.radius = radius_rule(self._n, self.robot.dof, self.gamma)
        self._adj.clear()

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "gamma": self.gamma,
            "step": self.step,
            "resolution": self.resolution,
            "radius": self.radius,
            "rng_state": self.rng.bit_generator.state,
            "vertices": [
                {
                    "id": v,
                    "q": self._configs[v].tolist(),
                    "parent": self.parent[v],
                    "coverage": to_indices(self._coverage[v]),
                }
                for v in range(self._n)
            ],
            "edges": [[u, v, s.value] for u, v, s in self.edges()],
        }

    @classmethod
    def from_dict(cls, data: dict, robot: RobotModel, workspace: Workspace2D, clock=None) -> "Roadmap":
        verts = data["vertices"]
        rm = cls(
            robot,
            workspace,
            verts[0]["q"],
            seed=data["seed"],
            gamma=data["gamma"],
            step=data["step"],
            resolution=data["resolution"],
            clock=clock,
        )
        for item in verts[1:]:
            q = np.asarray(item["q"], dtype=float)
            p = item["parent"]
            rm._insert(q, p, float(distances(rm._configs[p], q[None, :])[0]))
            if rm._coverage[-1] != from_indices(item["coverage"]):
                raise ValueError(f"stored coverage of vertex {item['id']} disagrees with the sensor model")
        for u, v, s in data["edges"]:
            rm._status[_key(u, v)] = EdgeStatus(s)
        rm._update_radius()
        rm.rng.bit_generator.state = data["rng_state"]
        return rm


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)
