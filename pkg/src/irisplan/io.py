"""Scenario files.

A scenario is a JSON object::

    {
      "bounds_side": 10.0,
      "obstacles": [[1.5, 1.0, 2.5, 3.0], [-3.0, -3.5, -1.0, -2.5]],
      "poi_count": 100,
      "sensor": {"fov_half_angle": 0.7853981633974483, "range": 5.0},
      "base": [0.0, 0.0],
      "link_lengths": [0.8, 0.8, 0.8, 0.8, 0.8],
      "start": [0, 0, 0, 0, 0]
    }

Only ``bounds_side`` is required. ``poi`` may replace ``poi_count`` with an
explicit list of points. Missing sensor values default to a quarter-pi
half-angle and half the side as range; ``start`` defaults to all zeros.
A file is recognised as an explicit graph instead when it has a
``vertices`` key (see :mod:`irisplan.graph`).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import ExplicitGraph
from .robot import RobotModel, as_configuration
from .scenario import SensorParams, Workspace2D, square_boundary_poi


class ScenarioError(ValueError):
    """Malformed scenario document."""


@dataclass(frozen=True, eq=False)
class Scenario:
    workspace: Workspace2D
    robot: RobotModel
    start: np.ndarray


DEFAULT_SCENARIO = {
    "bounds_side": 10.0,
    "obstacles": [[1.5, 1.0, 2.5, 3.0], [-3.0, -3.5, -1.0, -2.5]],
    "poi_count": 100,
    "sensor": {"fov_half_angle": math.pi / 4, "range": 5.0},
    "base": [0.0, 0.0],
    "link_lengths": [0.8] * 5,
    "start": [0.0] * 5,
}


def scenario_from_dict(data: dict) -> Scenario:
    try:
        side = float(data["bounds_side"])
        sensor_cfg = data.get("sensor", {})
        sensor = SensorParams(
            float(sensor_cfg.get("fov_half_angle", math.pi / 4)),
            float(sensor_cfg.get("range", side / 2)),
        )
        if "poi" in data:
            poi = np.asarray(data["poi"], dtype=float)
        else:
            poi = square_boundary_poi(side, int(data.get("poi_count", 400)))
        workspace = Workspace2D(side, tuple(tuple(map(float, o)) for o in data.get("obstacles", [])), poi)
        robot = RobotModel(
            base=tuple(data.get("base", (0.0, 0.0))),
            link_lengths=tuple(data.get("link_lengths", (1.0,) * 5)),
            sensor=sensor,
        )
        start = as_configuration(data.get("start", [0.0] * robot.dof), robot.dof)
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad scenario: {exc}") from exc
    return Scenario(workspace, robot, start)


def load(path: str | Path) -> Scenario | ExplicitGraph:
    """Read a scenario or an explicit-graph fixture, whichever the file holds."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: expected a JSON object")
    if "vertices" in data:
        try:
            return ExplicitGraph.from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"bad graph fixture: {exc}") from exc
    return scenario_from_dict(data)
