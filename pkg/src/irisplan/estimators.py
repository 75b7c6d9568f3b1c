"""scikit-learn style front ends.

``fit`` takes the problem instance (a scenario or a graph) in place of a data
matrix and stores results in trailing-underscore attributes, so the planners
support ``get_params``/``set_params``, ``clone`` and parameter grids.
"""

from __future__ import annotations

from numbers import Integral, Real
from pathlib import Path

from sklearn.base import BaseEstimator
from sklearn.utils._param_validation import Interval, StrOptions
from sklearn.utils.validation import check_is_fitted

from .bitset import popcount
from .clock import make_clock
from .driver import ApproxParams, run
from .graph import ExplicitGraph
from .io import Scenario, load, scenario_from_dict
from .search import near_optimal_search


def _as_scenario(X) -> Scenario:
    if isinstance(X, Scenario):
        return X
    if isinstance(X, dict):
        return scenario_from_dict(X)
    if isinstance(X, (str, Path)):
        loaded = load(X)
        if isinstance(loaded, Scenario):
            return loaded
    raise TypeError(f"expected a Scenario, a scenario dict or a scenario file, got {type(X).__name__}")


def _as_graph(X):
    if isinstance(X, dict):
        return ExplicitGraph.from_dict(X)
    if isinstance(X, (str, Path)):
        loaded = load(X)
        if isinstance(loaded, ExplicitGraph):
            return loaded
        raise TypeError(f"{X} holds a scenario, not a graph")
    if all(hasattr(X, a) for a in ("n_vertices", "coverage", "neighbors")):
        return X
    raise TypeError(f"expected a graph, got {type(X).__name__}")


class GraphInspectionSearch(BaseEstimator):
    """Near-optimal inspection path on a fixed graph.

    After ``fit(graph)``: ``path_``, ``pap_``, ``coverage_count_``,
    ``length_`` and ``result_`` (the full :class:`~irisplan.search.SearchResult`).
    """

    _parameter_constraints = {
        "eps": [Interval(Real, 0, None, closed="left")],
        "p": [Interval(Real, 0, 1, closed="right")],
        "max_expansions": [Interval(Integral, 1, None, closed="left"), None],
    }

    def __init__(self, eps=0.0, p=1.0, max_expansions=None):
        self.eps = eps
        self.p = p
        self.max_expansions = max_expansions

    def fit(self, X, y=None):
        self._validate_params()
        graph = _as_graph(X)
        start = getattr(graph, "start", 0)
        goal = graph.covered
        self.result_ = near_optimal_search(graph, start, goal, self.eps, self.p, max_expansions=self.max_expansions)
        self.path_ = self.result_.path
        self.pap_ = self.result_.pap
        self.coverage_count_ = popcount(self.path_.coverage) if self.path_ else 0
        self.length_ = self.path_.length if self.path_ else None
        return self


class IrisPlanner(BaseEstimator):
    """Anytime inspection planner for a planar manipulator scenario.

    After ``fit(scenario)``: ``plan_`` (best validated path or ``None``),
    ``records_`` (anytime trace), ``roadmap_`` and ``result_``.
    ``score()`` returns the covered fraction of the POI.
    """

    _parameter_constraints = {
        "eps0": [Interval(Real, 0, None, closed="left")],
        "p0": [Interval(Real, 0, 1, closed="right")],
        "f": [Interval(Real, 0, 1, closed="both")],
        "batch": [Interval(Integral, 1, None, closed="left")],
        "time_budget": [Interval(Real, 0, None, closed="neither")],
        "seed": ["random_state"],
        "clock": [StrOptions({"work", "wall"})],
        "gamma": [Interval(Real, 0, None, closed="neither")],
        "step": [Interval(Real, 0, None, closed="neither")],
        "resolution": [Interval(Real, 0, None, closed="neither")],
        "max_retries": [Interval(Integral, 1, None, closed="left")],
    }

    def __init__(
        self,
        eps0=1.0,
        p0=1.0,
        f=0.0,
        batch=10,
        time_budget=30.0,
        seed=0,
        clock="work",
        gamma=3.0,
        step=0.5,
        resolution=0.05,
        max_retries=10,
    ):
        self.eps0 = eps0
        self.p0 = p0
        self.f = f
        self.batch = batch
        self.time_budget = time_budget
        self.seed = seed
        self.clock = clock
        self.gamma = gamma
        self.step = step
        self.resolution = resolution
        self.max_retries = max_retries

    def fit(self, X, y=None):
        self._validate_params()
        if self.seed is None or not isinstance(self.seed, Integral):
            raise ValueError("seed must be an integer so runs are reproducible")
        sc = _as_scenario(X)
        self.result_ = run(
            sc.workspace,
            sc.robot,
            sc.start,
            ApproxParams(self.eps0, self.p0, self.f),
            seed=int(self.seed),
            time_budget=self.time_budget,
            batch=self.batch,
            clock=make_clock(self.clock),
            max_retries=self.max_retries,
            gamma=self.gamma,
            step=self.step,
            resolution=self.resolution,
        )
        self.plan_ = self.result_.plan
        self.records_ = self.result_.records
        self.roadmap_ = self.result_.roadmap
        self.n_poi_ = sc.workspace.n_poi
        return self

    def score(self, X=None, y=None) -> float:
        check_is_fitted(self, "result_")
        if self.plan_ is None:
            return 0.0
        return popcount(self.plan_.coverage) / self.n_poi_
