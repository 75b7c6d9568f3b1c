"""Clocks used to budget IRIS runs.

``WallClock`` reads ``time.monotonic``. ``WorkClock`` advances only when work is
charged to it (collision-checked configurations, sensor evaluations, search
node expansions, OPEN/CLOSED comparisons, Dijkstra settles), so budgets and the timestamps written to
``anytime.csv`` are reproducible bit for bit. Its unit costs are rough
per-operation timings of this implementation, so one work-second is of the
order of one real second.
"""

from __future__ import annotations

import time

DEFAULT_COSTS = {
    "config_check": 3.0e-6,
    "edge_check": 1.2e-4,
    "sense": 1.1e-4,
    "nn_query": 6.0e-8,
    "expand": 1.0e-5,
    "settle": 1.75e-6,
    "child": 1.0e-6,
    "compare": 8.1e-7,
}


class WallClock:
    def __init__(self):
        self._t0 = time.monotonic()

    def elapsed(self) -> float:
        return time.monotonic() - self._t0

    def charge(self, kind: str, count: float = 1) -> None:
        pass


class WorkClock:
    """Deterministic clock driven by operation counts."""

    def __init__(self, costs: dict[str, float] | None = None):
        self.costs = dict(DEFAULT_COSTS if costs is None else costs)
        self.counts = {k: 0 for k in self.costs}
        self._t = 0.0

    def elapsed(self) -> float:
        return self._t

    def charge(self, kind: str, count: float = 1) -> None:
        self.counts[kind] = self.counts.get(kind, 0) + count
        self._t += self.costs[kind] * count


def make_clock(kind: str):
    if kind == "wall":
        return WallClock()
    if kind == "work":
        return WorkClock()
    raise ValueError(f"unknown clock {kind!r}; expected 'wall' or 'work'")
