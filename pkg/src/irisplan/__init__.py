"""Inspection planning by incremental roadmap growth and near-optimal graph search."""

from .driver import AnytimeRecord, ApproxParams, RunResult, run, tighten, validate_path
from .estimators import GraphInspectionSearch, IrisPlanner
from .graph import ExplicitGraph
from .io import Scenario, load, scenario_from_dict
from .oracle import optimal_completion, optimal_search
from .roadmap import EdgeStatus, Roadmap, radius_rule
from .robot import RobotModel
from .scenario import Rect, SensorParams, SensorPose, Workspace2D
from .search import (
    PAP,
    AchievablePath,
    MacroEdge,
    PathPair,
    SearchResult,
    dominates,
    eps_p_dominates,
    extend,
    heuristic,
    is_eps_p_bounded,
    milestone_neighbors,
    near_optimal_search,
    subsume,
)

__version__ = "0.1.0"
