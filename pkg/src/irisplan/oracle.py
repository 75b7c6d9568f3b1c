"""Exact graph inspection by Dijkstra over the product of vertices and coverage subsets.

Ground truth for small instances. Deliberately shares no code with
:mod:`irisplan.search`: a state is ``(vertex, covered)``, moving along an edge
``(u, v)`` costs its length and adds the POI sensed at ``v``, and a state is
skipped once a settled state at the same vertex covers a superset (settled
states are never longer, Dijkstra pops in length order).
"""

from __future__ import annotations

import heapq
import itertools

from .search import AchievablePath

MAX_STATES = 2**20


class OracleGuardError(ValueError):
    """The state space ``|V| * 2^|I_G|`` is too large to enumerate."""


def _goal_of(graph, goal):
    if goal is not None:
        return goal
    cov = 0
    for v in range(graph.n_vertices):
        cov |= graph.coverage(v)
    return cov


def _guard(graph, goal, max_states):
    k = bin(goal).count("1")
    if graph.n_vertices * 2**k > max_states:
        raise OracleGuardError(
            f"{graph.n_vertices} vertices x 2^{k} coverage subsets exceeds the {max_states}-state guard"
        )


def _dijkstra(graph, source: int, covered: int, goal: int):
    """Shortest walk from ``(source, covered | S(source))`` to any state covering ``goal``.

    Returns ``(length, vertices)`` or ``None`` if no state covers ``goal``.
    """
    covered |= graph.coverage(source)
    tie = itertools.count()
    heap = [(0.0, next(tie), source, covered, None)]
    settled: dict[int, list[int]] = {}
    while heap:
        d, _, v, cov, back = heapq.heappop(heap)
        if any(cov & ~c == 0 for c in settled.get(v, ())):
            continue
        settled.setdefault(v, []).append(cov)
        node = (v, back)
        if goal & ~cov == 0:
            verts = []
            while node is not None:
                verts.append(node[0])
                node = node[1]
            return d, verts[::-1]
        for w, length in graph.neighbors(v):
            ncov = cov | graph.coverage(w)
            if any(ncov & ~c == 0 for c in settled.get(w, ())):
                continue
            heapq.heappush(heap, (d + length, next(tie), w, ncov, node))
    return None


def optimal_search(graph, start: int = 0, goal: int | None = None, max_states: int = MAX_STATES) -> AchievablePath:
    """Minimum-length walk from ``start`` that covers ``goal`` (default: everything sensed).

    Raises :class:`OracleGuardError` for oversized instances and ``ValueError``
    when the goal coverage is unreachable.
    """
    goal = _goal_of(graph, goal)
    _guard(graph, goal, max_states)
    found = _dijkstra(graph, start, 0, goal)
    if found is None:
        raise ValueError("goal coverage is unreachable from the start vertex")
    _, verts = found
    length = 0.0
    cov = 0
    for a, b in zip(verts, verts[1:]):
        length += _edge(graph, a, b)
    for v in verts:
        cov |= graph.coverage(v)
    return AchievablePath(tuple(verts), length, cov)


def optimal_completion(graph, u: int, covered: int, goal: int | None = None, max_states: int = MAX_STATES) -> float:
    """Shortest length of a walk from ``u`` that lifts ``covered`` to ``goal``.

    Returns ``inf`` if the goal cannot be completed.
    """
    goal = _goal_of(graph, goal)
    _guard(graph, goal, max_states)
    found = _dijkstra(graph, u, covered, goal)
    return float("inf") if found is None else found[0]


def _edge(graph, a, b):
    for w, length in graph.neighbors(a):
        if w == b:
            return length
    raise KeyError((a, b))
