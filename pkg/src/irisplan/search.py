"""Near-optimal graph inspection search over path pairs.

A search node couples an *achievable* path with a *potentially-achievable*
summary (PAP): a length lower bound and a coverage superset of every path that
was folded into it. Nodes are pruned by exact dominance against CLOSED and by
approximate (epsilon, p) dominance against OPEN, where pruned paths live on in
the PAP of the survivor. OPEN is ordered A*-style on the PAP: PAP length plus
the heuristic evaluated at the PAP's coverage. The search stops as soon as a popped node's PAP
coverage reaches the goal coverage and returns that node's achievable path,
whose length is then within ``1 + eps`` of optimal and whose coverage holds at
least a fraction ``p`` of the joint coverage with the optimum.

Any object exposing ``n_vertices``, ``coverage(v)`` and ``neighbors(v)`` (a
list of ``(u, length)`` pairs) can be searched; both :class:`~irisplan.roadmap.Roadmap`
and :class:`~irisplan.graph.ExplicitGraph` qualify.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .bitset import CoverageSet, is_subset, popcount

logger = logging.getLogger(__name__)

FOUND = "found"
NO_PATH = "no_path"
BUDGET = "budget"


class InvariantViolation(AssertionError):
    """A path pair left the (epsilon, p)-bounded region or broke its own invariants."""


@dataclass(frozen=True)
class AchievablePath:
    vertices: tuple[int, ...]
    length: float
    coverage: CoverageSet


@dataclass(frozen=True)
class PAP:
    """Potentially-achievable path: a length lower bound and a coverage superset."""

    length: float
    coverage: CoverageSet


@dataclass(frozen=True)
class PathPair:
    achievable: AchievablePath
    pap: PAP

    @classmethod
    def trivial(cls, path: AchievablePath) -> "PathPair":
        return cls(path, PAP(path.length, path.coverage))


@dataclass(frozen=True)
class MacroEdge:
    """Shortest roadmap walk ``vertices[0] -> vertices[-1]`` with per-hop lengths."""

    vertices: tuple[int, ...]
    lengths: tuple[float, ...]

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def target(self) -> int:
        return self.vertices[-1]

    @property
    def length(self) -> float:
        total = 0.0
        for x in self.lengths:
            total += x
        return total

    def __add__(self, other: "MacroEdge") -> "MacroEdge":
        if other.source != self.target:
            raise ValueError("macro-edges do not chain")
        return MacroEdge(self.vertices + other.vertices[1:], self.lengths + other.lengths)


class TraceEvent(NamedTuple):
    vertex: int
    coverage: CoverageSet
    g: float
    h: float
    event: str
    pap_coverage: CoverageSet = 0

    def __str__(self) -> str:
        return f"({self.vertex}, {popcount(self.coverage)}, {self.g:.6g}, {self.h:.6g}, {self.event})"


@dataclass
class SearchStats:
    expansions: int = 0
    pushes: int = 0
    dominated: int = 0
    subsumed: int = 0
    merged: int = 0
    bound_checks: int = 0
    heuristic_calls: int = 0
    elapsed: float = 0.0


@dataclass
class SearchResult:
    status: str
    path: AchievablePath | None = None
    pap: PAP | None = None
    partial: AchievablePath | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def found(self) -> bool:
        return self.status == FOUND


def dominates(P, Q) -> bool:
    """``P`` is no longer than ``Q`` and covers a superset of it."""
    return P.length <= Q.length and is_subset(Q.coverage, P.coverage)


def eps_p_dominates(P, Q, eps: float, p: float) -> bool:
    """Relaxed dominance: length within ``1 + eps`` and a ``p`` share of the joint coverage.

    ``Q`` may be a PAP; only its ``length`` and ``coverage`` are read.
    """
    return P.length <= (1.0 + eps) * Q.length and popcount(P.coverage) >= p * popcount(P.coverage | Q.coverage)


def is_eps_p_bounded(pp: PathPair, eps: float, p: float) -> bool:
    return eps_p_dominates(pp.achievable, pp.pap, eps, p)


def extend(pp: PathPair, edge: MacroEdge, graph) -> PathPair:
    """Append ``edge`` to both halves of a path pair.

    Lengths are accumulated hop by hop so the stored length equals a
    left-to-right re-summation of the path's edges.
    """
    P, Q = pp.achievable, pp.pap
    length, bound = P.length, Q.length
    sensed = 0
    for x in edge.lengths:
        length += x
        bound += x
    for v in edge.vertices[1:]:
        sensed |= graph.coverage(v)
    return PathPair(
        AchievablePath(P.vertices + edge.vertices[1:], length, P.coverage | sensed),
        PAP(bound, Q.coverage | sensed),
    )


def subsume(pp1: PathPair, pp2: PathPair) -> PathPair:
    """``pp1`` absorbing ``pp2``: keep ``pp1``'s path, widen its PAP over both."""
    return PathPair(
        pp1.achievable,
        PAP(min(pp1.pap.length, pp2.pap.length), pp1.pap.coverage | pp2.pap.coverage),
    )


def milestone_neighbors(graph, u: int, covered: CoverageSet, clock=None) -> list[MacroEdge]:
    """Shortest walks from ``u`` to the first-met vertices that add coverage.

    Dijkstra from ``u`` over the graph; a settled vertex whose sensed set is not
    inside ``covered`` is a milestone and is not expanded further.
    """
    dist = {u: 0.0}
    prev: dict[int, tuple[int, float]] = {}
    heap = [(0.0, u)]
    done = set()
    out = []
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if v != u and graph.coverage(v) & ~covered:
            verts, hops = [v], []
            w = v
            while w != u:
                w_prev, hop = prev[w]
                verts.append(w_prev)
                hops.append(hop)
                w = w_prev
            out.append(MacroEdge(tuple(reversed(verts)), tuple(reversed(hops))))
            continue
        for w, length in graph.neighbors(v):
            nd = d + length
            if w not in done and nd < dist.get(w, math.inf):
                dist[w] = nd
                prev[w] = (v, length)
                heapq.heappush(heap, (nd, w))
    if clock is not None:
        clock.charge("settle", len(done))
    return out


def heuristic(graph, u: int, covered: CoverageSet, goal: CoverageSet, clock=None) -> float:
    """Lower bound on the length needed to lift ``covered`` to ``goal`` from ``u``.

    Grows a Dijkstra ball around ``u`` until the vertices inside it sense
    everything still missing, and returns the ball's radius. Returns ``inf``
    when the reachable part of the graph cannot complete the coverage.
    """
    missing = goal & ~covered
    if not missing:
        return 0.0
    dist = {u: 0.0}
    heap = [(0.0, u)]
    done = set()
    try:
        while heap:
            d, v = heapq.heappop(heap)
            if v in done:
                continue
            done.add(v)
            missing &= ~graph.coverage(v)
            if not missing:
                return d
            for w, length in graph.neighbors(v):
                nd = d + length
                if w not in done and nd < dist.get(w, math.inf):
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))
        return math.inf
    finally:
        if clock is not None:
            clock.charge("settle", len(done))


class _Entry:
    __slots__ = ("vertex", "pair", "h", "seq", "ver", "alive")

    def __init__(self, vertex, pair, h, seq):
        self.vertex = vertex
        self.pair = pair
        self.h = h
        self.seq = seq
        self.ver = 0
        self.alive = True


def near_optimal_search(
    graph,
    start: int,
    goal: CoverageSet,
    eps: float,
    p: float,
    *,
    clock=None,
    deadline: float = math.inf,
    max_expansions: int | None = None,
    trace: list | None = None,
) -> SearchResult:
    """Search for an (eps, p)-near-optimal inspection path from ``start``.

    Parameters
    ----------
    graph
        Graph exposing the search protocol.
    start : int
        Start vertex.
    goal : CoverageSet
        Coverage that ends the search once a popped PAP contains it.
    eps, p : float
        Approximation factors, ``eps >= 0`` and ``0 < p <= 1``.
    clock, deadline
        Optional clock (``elapsed()``/``charge()``) and the elapsed-time value
        at which the search gives up with status ``"budget"``.
    max_expansions : int, optional
        Cap on popped nodes.
    trace : list, optional
        Receives a :class:`TraceEvent` for every push, pop and pruning event.

    Returns
    -------
    SearchResult
        ``status`` is ``"found"``, ``"no_path"`` or ``"budget"``. On budget
        exhaustion ``partial`` holds the best closed achievable path (most
        coverage, then shortest).
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    stats = SearchStats()
    t0 = clock.elapsed() if clock is not None else 0.0
    debug = logger.isEnabledFor(logging.DEBUG)

    def emit(entry_vertex, pair, h, event):
        ev = TraceEvent(entry_vertex, pair.achievable.coverage, pair.achievable.length, h, event, pair.pap.coverage)
        if trace is not None:
            trace.append(ev)
        if debug:
            logger.debug("%s", ev)

    def check(pair):
        stats.bound_checks += 1
        P, Q = pair.achievable, pair.pap
        if not (Q.length <= P.length and is_subset(P.coverage, Q.coverage)):
            raise InvariantViolation(f"path pair invariant broken: {pair}")
        if not is_eps_p_bounded(pair, eps, p):
            raise InvariantViolation(f"path pair not ({eps}, {p})-bounded: {pair}")

    h_memo: dict[tuple[int, CoverageSet], float] = {}

    def h_of(v, cov):
        key = (v, goal & ~cov)
        h = h_memo.get(key)
        if h is None:
            stats.heuristic_calls += 1
            h = heuristic(graph, v, cov, goal, clock)
            h_memo[key] = h
        return h

    heap: list = []
    open_bucket: dict[int, list[_Entry]] = {}
    closed_bucket: dict[int, list[_Entry]] = {}
    counter = 0

    def push(entry):
        pair = entry.pair
        g = pair.pap.length
        heapq.heappush(
            heap,
            (g + entry.h, -popcount(pair.pap.coverage), g, entry.seq, entry.ver, entry),
        )

    start_path = AchievablePath((start,), 0.0, graph.coverage(start))
    first = _Entry(start, PathPair.trivial(start_path), h_of(start, start_path.coverage), counter)
    counter += 1
    check(first.pair)
    open_bucket[start] = [first]
    push(first)
    stats.pushes += 1
    emit(start, first.pair, first.h, "push")

    best_closed: AchievablePath | None = None

    def finish(result: SearchResult) -> SearchResult:
        stats.elapsed = (clock.elapsed() - t0) if clock is not None else 0.0
        result.stats = stats
        return result

    while heap:
        *_, ver, node = heapq.heappop(heap)
        if not node.alive or ver != node.ver:
            continue
        node.alive = False
        open_bucket[node.vertex].remove(node)
        closed_bucket.setdefault(node.vertex, []).append(node)
        stats.expansions += 1
        if clock is not None:
            clock.charge("expand")
        u, pair = node.vertex, node.pair
        emit(u, pair, node.h, "popped")

        P = pair.achievable
        if best_closed is None or (popcount(P.coverage), -P.length) > (popcount(best_closed.coverage), -best_closed.length):
            best_closed = P
        if is_subset(goal, pair.pap.coverage):
            return finish(SearchResult(FOUND, P, pair.pap, P))
        if (max_expansions is not None and stats.expansions >= max_expansions) or (
            clock is not None and clock.elapsed() >= deadline
        ):
            return finish(SearchResult(BUDGET, partial=best_closed))

        edges = milestone_neighbors(graph, u, P.coverage, clock)
        scanned = 0
        for edge in edges:
            child = extend(pair, edge, graph)
            v = edge.target
            scanned += len(closed_bucket.get(v, ())) + 2 * len(open_bucket.get(v, ()))

            # Compare PAPs, not achievable paths: a closed PAP that dominates the
            # child's PAP already stands for everything the child could lead to.
            if any(dominates(c.pair.pap, child.pap) for c in closed_bucket.get(v, ())):
                stats.dominated += 1
                emit(v, child, math.nan, "dominated")
                continue

            bucket = open_bucket.setdefault(v, [])
            absorbed = False
            for other in bucket:
                merged = subsume(other.pair, child)
                if is_eps_p_bounded(merged, eps, p):
                    check(merged)
                    other.pair = merged
                    other.h = h_of(v, merged.pap.coverage)
                    other.ver += 1
                    push(other)
                    stats.subsumed += 1
                    emit(v, child, math.nan, "subsumed")
                    absorbed = True
                    break
            if absorbed:
                continue

            keep = []
            for other in bucket:
                merged = subsume(child, other.pair)
                if is_eps_p_bounded(merged, eps, p):
                    check(merged)
                    child = merged
                    other.alive = False
                    stats.merged += 1
                    emit(v, other.pair, other.h, "merged")
                else:
                    keep.append(other)
            bucket[:] = keep

            entry = _Entry(v, child, h_of(v, child.pap.coverage), counter)
            counter += 1
            check(child)
            bucket.append(entry)
            push(entry)
            stats.pushes += 1
            emit(v, child, entry.h, "push")
        if clock is not None:
            clock.charge("child", len(edges))
            clock.charge("compare", scanned)

    return finish(SearchResult(NO_PATH, partial=best_closed))


def path_length(graph, vertices) -> float:
    """Left-to-right sum of edge lengths along ``vertices``."""
    total = 0.0
    for a, b in zip(vertices, vertices[1:]):
        total += graph.edge_length(a, b)
    return total


def path_coverage(graph, vertices) -> CoverageSet:
    cov = 0
    for v in vertices:
        cov |= graph.coverage(v)
    return cov
