"""Explicit weighted graphs with per-vertex coverage, for fixtures and the oracle.

JSON layout::

    {
      "vertices": [{"id": "a", "coverage": []}, {"id": "b", "coverage": [0]}, ...],
      "edges": [["a", "b", 1.0], ...],
      "start": "a"
    }

Vertex ids may be strings or integers; internally vertices are numbered in
listing order. Edges are undirected. ``start`` defaults to the first vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Sequence

from .bitset import CoverageSet, from_indices, to_indices


@dataclass
class ExplicitGraph:
    coverages: list[CoverageSet]
    adjacency: list[list[tuple[int, float]]]
    labels: list[Hashable] = field(default_factory=list)
    start: int = 0

    def __post_init__(self):
        if not self.labels:
            self.labels = list(range(len(self.coverages)))
        self.covered = 0
        for c in self.coverages:
            self.covered |= c

    @classmethod
    def from_edges(
        cls,
        coverages: Sequence[Iterable[int] | CoverageSet],
        edges: Iterable[tuple[int, int, float]],
        labels: Sequence[Hashable] | None = None,
        start: int = 0,
    ) -> "ExplicitGraph":
        covs = [c if isinstance(c, int) else from_indices(c) for c in coverages]
        adj: list[dict[int, float]] = [{} for _ in covs]
        for u, v, length in edges:
            if length < 0:
                raise ValueError("edge lengths must be non-negative")
            if u == v:
                continue
            # keep the shortest of parallel edges
            if v not in adj[u] or length < adj[u][v]:
                adj[u][v] = float(length)
                adj[v][u] = float(length)
        adjacency = [sorted(a.items()) for a in adj]
        return cls(covs, adjacency, list(labels) if labels is not None else [], start)

    @classmethod
    def from_dict(cls, data: dict) -> "ExplicitGraph":
        verts = data["vertices"]
        labels = [v["id"] for v in verts]
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise ValueError("duplicate vertex ids")
        edges = [(index[u], index[v], float(w)) for u, v, w in data["edges"]]
        start = index[data["start"]] if "start" in data else 0
        return cls.from_edges([v.get("coverage", []) for v in verts], edges, labels, start)

    @classmethod
    def load(cls, path: str | Path) -> "ExplicitGraph":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        edges = [
            [self.labels[u], self.labels[v], w] for u, adj in enumerate(self.adjacency) for v, w in adj if u < v
        ]
        return {
            "vertices": [{"id": lab, "coverage": to_indices(c)} for lab, c in zip(self.labels, self.coverages)],
            "edges": edges,
            "start": self.labels[self.start],
        }

    @property
    def n_vertices(self) -> int:
        return len(self.coverages)

    def __len__(self) -> int:
        return len(self.coverages)

    def coverage(self, v: int) -> CoverageSet:
        return self.coverages[v]

    def neighbors(self, v: int) -> list[tuple[int, float]]:
        return self.adjacency[v]

    def edge_length(self, u: int, v: int) -> float:
        for w, length in self.adjacency[u]:
            if w == v:
                return length
        raise KeyError(f"({u}, {v}) is not an edge")

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v, _ in self.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(self.coverages)


def snapshot(g) -> ExplicitGraph:
    """Freeze any graph exposing the search protocol into an ``ExplicitGraph``."""
    n = g.n_vertices
    return ExplicitGraph(
        [g.coverage(v) for v in range(n)],
        [list(g.neighbors(v)) for v in range(n)],
    )
