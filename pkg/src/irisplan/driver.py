"""The IRIS outer loop: grow the roadmap, search it, validate lazily, tighten.

Each iteration adds a batch of RRT vertices, runs near-optimal searches on
the implicit RRG until a returned path survives lazy collision checking (or
the retry cap is hit), keeps the path if it beats the best so far (more
coverage first, then shorter), and tightens the approximation factors.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bitset import popcount
from .clock import WallClock
from .roadmap import EdgeStatus, Roadmap
from .robot import RobotModel
from .scenario import Workspace2D
from .search import AchievablePath, near_optimal_search

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ApproxParams:
    """Approximation factors and the tightening factor ``f``.

    ``f = 0`` keeps ``epsilon`` and ``p`` fixed for the whole run.
    """

    epsilon: float = 1.0
    p: float = 1.0
    f: float = 0.0

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if not 0 < self.p <= 1:
            raise ValueError("p must lie in (0, 1]")
        if not 0 <= self.f <= 1:
            raise ValueError("f must lie in [0, 1]")


def tighten(params: ApproxParams) -> ApproxParams:
    """Move ``p`` toward 1 and ``epsilon`` toward 0 by the fraction ``f``."""
    f = params.f
    return replace(
        params,
        p=params.p + f * (1.0 - params.p),
        epsilon=params.epsilon + f * (0.0 - params.epsilon),
    )


@dataclass(frozen=True)
class AnytimeRecord:
    wall_time: float
    iteration: int
    coverage_count: int
    coverage_fraction: float
    path_length: float
    roadmap_size: int


@dataclass
class RunResult:
    plan: AchievablePath | None
    records: list[AnytimeRecord]
    roadmap: Roadmap
    params: ApproxParams
    iterations: int = 0
    episode_times: list[float] = field(default_factory=list)
    invalidated_edges: int = 0

    @property
    def mean_episode_time(self) -> float:
        return float(np.mean(self.episode_times)) if self.episode_times else math.nan


def validate_path(roadmap: Roadmap, path: AchievablePath, checker=None):
    """Collision-check the path's edges in order until one fails.

    Edges already known free are skipped. Each checked edge is marked free or
    invalid on the roadmap. Returns ``None`` when the whole path is valid,
    otherwise the first invalid edge as ``(u, v)``.

    ``checker(u, v) -> bool`` overrides the roadmap's own edge check.
    """
    check = roadmap.check_edge if checker is None else checker
    verts = path.vertices
    for u, v in zip(verts, verts[1:]):
        if u == v or roadmap.edge_status(u, v) is EdgeStatus.FREE:
            continue
        if check(u, v):
            roadmap.mark_edge(u, v, EdgeStatus.FREE)
        else:
            roadmap.mark_edge(u, v, EdgeStatus.INVALID)
            return (u, v)
    return None


def _better(path: AchievablePath, best: AchievablePath | None) -> bool:
    if best is None:
        return True
    a, b = popcount(path.coverage), popcount(best.coverage)
    return a > b or (a == b and path.length < best.length)


def run(
    workspace: Workspace2D,
    robot: RobotModel,
    start,
    params: ApproxParams,
    *,
    seed: int = 0,
    time_budget: float = 30.0,
    batch: int = 10,
    clock=None,
    max_retries: int = 10,
    max_iterations: int | None = None,
    gamma: float = 3.0,
    step: float = 0.5,
    resolution: float = 0.05,
    on_iteration=None,
) -> RunResult:
    """Run IRIS until ``time_budget`` (in ``clock`` units) is spent.

    Parameters
    ----------
    workspace, robot, start
        The inspection scenario. ``start`` must be collision free, otherwise
        :class:`~irisplan.roadmap.InfeasibleStartError` is raised.
    params : ApproxParams
        Initial ``epsilon``, ``p`` and tightening factor ``f``.
    seed : int
        Roadmap sampling seed.
    time_budget : float
        Total budget; searches are cut off when it runs out.
    batch : int
        Vertices added per iteration.
    clock
        ``WallClock`` (default) or ``WorkClock`` for reproducible runs.
    max_retries : int
        Searches per iteration after edge invalidations.
    max_iterations : int, optional
        Hard cap on iterations, mostly for tests.
    on_iteration : callable, optional
        Called as ``on_iteration(iteration, roadmap, result)`` after each iteration.
    """
    clock = WallClock() if clock is None else clock
    roadmap = Roadmap(robot, workspace, start, seed=seed, gamma=gamma, step=step, resolution=resolution, clock=clock)
    k = workspace.n_poi
    result = RunResult(None, [], roadmap, params)
    best: AchievablePath | None = None
    it = 0
    while clock.elapsed() < time_budget and (max_iterations is None or it < max_iterations):
        it += 1
        roadmap.grow(batch)
        goal = roadmap.covered
        candidate = None
        for _ in range(max_retries):
            t0 = clock.elapsed()
            res = near_optimal_search(
                roadmap, 0, goal, params.epsilon, params.p, clock=clock, deadline=time_budget
            )
            result.episode_times.append(clock.elapsed() - t0)
            if not res.found:
                break
            bad = validate_path(roadmap, res.path)
            if bad is None:
                candidate = res.path
                break
            result.invalidated_edges += 1
            logger.debug("iteration %d: edge %s invalid, re-searching", it, bad)
        if candidate is not None and _better(candidate, best):
            best = candidate
            c = popcount(best.coverage)
            result.records.append(
                AnytimeRecord(clock.elapsed(), it, c, c / k, best.length, roadmap.n_vertices)
            )
            logger.info("iteration %d: coverage %d/%d length %.4f", it, c, k, best.length)
        if on_iteration is not None:
            on_iteration(it, roadmap, res)
        params = tighten(params)
    result.plan = best
    result.params = params
    result.iterations = it
    return result
