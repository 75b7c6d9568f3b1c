import json
import math

import mpmath
import numpy as np
import pytest

from irisplan.bitset import is_subset
from irisplan.clock import WorkClock
from irisplan.io import DEFAULT_SCENARIO, scenario_from_dict
from irisplan.robot import RobotModel, angular_difference, config_collision_free, distance, edge_collision_free
from irisplan.roadmap import (
    EdgeStatus,
    EdgeStatusError,
    InfeasibleStartError,
    Roadmap,
    RoadmapGrowthError,
    radius_rule,
)
from irisplan.scenario import Workspace2D

SC = scenario_from_dict(DEFAULT_SCENARIO)

# Frozen from mpmath at 30 digits: 2 * (ln 100 / 100) ** (1/5).
RADIUS_100_5_2 = 1.0806352563345580


def make(seed=0, **kw):
    return Roadmap(SC.robot, SC.workspace, SC.start, seed=seed, **kw)


class TestRadius:
    def test_values(self):
        assert radius_rule(math.e, 1, 1.0) == pytest.approx(1 / math.e, rel=1e-15)
        mpmath.mp.dps = 30
        exact = 2 * (mpmath.log(100) / 100) ** (mpmath.mpf(1) / 5)
        assert float(exact) == pytest.approx(RADIUS_100_5_2, rel=1e-15)
        assert radius_rule(100, 5, 2.0) == pytest.approx(RADIUS_100_5_2, rel=1e-12)

    def test_shrinks(self):
        r = [radius_rule(n, 5, 3.0) for n in range(3, 2000)]
        assert all(a > b for a, b in zip(r, r[1:]))

    def test_needs_two_vertices(self):
        with pytest.raises(ValueError):
            radius_rule(1, 5, 1.0)


class TestGrowth:
    def test_grow_adds_free_tree_vertices(self):
        rm = make()
        new = rm.grow(25)
        assert new == list(range(1, 26)) and rm.n_vertices == 26
        for v in new:
            p = rm.parent[v]
            assert config_collision_free(SC.robot, rm.config(v), SC.workspace)
            assert np.abs(angular_difference(rm.config(p), rm.config(v))).max() <= 0.5 + 1e-12
            assert edge_collision_free(SC.robot, rm.config(p), rm.config(v), SC.workspace, 0.05)
            assert rm.edge_status(p, v) is EdgeStatus.FREE
        assert rm.radius == pytest.approx(radius_rule(26, 5, 3.0))

    def test_deterministic(self):
        a, b = make(seed=7), make(seed=7)
        a.grow(30)
        b.grow(10)
        b.grow(20)
        np.testing.assert_array_equal(a.configs, b.configs)
        assert a.parent == b.parent
        c = make(seed=8)
        c.grow(30)
        assert not np.array_equal(a.configs, c.configs)

    def test_covered_is_union_and_monotone(self):
        rm = make()
        prev = rm.covered
        for _ in range(5):
            rm.grow(10)
            assert is_subset(prev, rm.covered)
            prev = rm.covered
        union = 0
        for v in range(rm.n_vertices):
            union |= rm.coverage(v)
        assert union == rm.covered

    def test_boxed_in_start_gives_up(self):
        # Slabs 0.001 above and below the straight arm: every joint motion hits one.
        w = Workspace2D(10.0, [(0.3, 0.001, 4.5, 0.5), (0.3, -0.5, 4.5, -0.001)], [(5.0, 0.0)])
        robot = RobotModel(link_lengths=(0.8,) * 5)
        q0 = np.zeros(5)
        assert config_collision_free(robot, q0, w)
        # Oracle: dense random probe of steered motions finds no free edge.
        rng = np.random.default_rng(0)
        for d in rng.uniform(-1, 1, size=(500, 5)):
            q1 = q0 + 0.5 * d / np.abs(d).max() * rng.uniform(0.01, 1.0)
            assert not edge_collision_free(robot, q0, q1, w, 0.005)
        rm = Roadmap(robot, w, q0, max_attempts=200)
        with pytest.raises(RoadmapGrowthError):
            rm.grow(1)
        assert rm.n_vertices == 1

    def test_infeasible_start(self):
        with pytest.raises(InfeasibleStartError):
            Roadmap(SC.robot, SC.workspace, (math.pi / 2, -math.pi / 2, 0.5, 0, 0))

    def test_add_vertex_rejects_colliding_edge(self):
        rm = make()
        with pytest.raises(ValueError):
            rm.add_vertex((1.0, 0, 0, 0, 0), 0)

    def test_work_clock_charged(self):
        clock = WorkClock()
        rm = make(clock=clock)
        rm.grow(10)
        assert clock.counts["sense"] == 11
        assert clock.elapsed() > 0


class TestRRG:
    def test_neighbors_are_radius_plus_tree(self):
        rm = make(seed=3)
        rm.grow(60)
        for v in range(0, 60, 7):
            got = {u for u, _ in rm.neighbors(v)}
            want = {u for u in range(rm.n_vertices) if u != v and distance(rm.config(u), rm.config(v)) <= rm.radius}
            want |= {rm.parent[v]} - {-1}
            want |= {u for u in range(rm.n_vertices) if rm.parent[u] == v}
            assert got == want
            for u, length in rm.neighbors(v):
                assert length == pytest.approx(distance(rm.config(u), rm.config(v)), abs=1e-12)

    def test_invalid_edge_disappears(self):
        rm = make(seed=3)
        rm.grow(60)
        v = 5
        u = next(u for u, _ in rm.neighbors(v) if not rm.is_tree_edge(u, v))
        rm.mark_edge(u, v, EdgeStatus.INVALID)
        assert u not in {w for w, _ in rm.neighbors(v)}
        assert v not in {w for w, _ in rm.neighbors(u)}
        rm.grow(5)
        assert u not in {w for w, _ in rm.neighbors(v)}

    def test_status_never_flips(self):
        rm = make(seed=3)
        rm.grow(20)
        u, v = next((u, v) for u in range(20) for v in range(u + 1, 20) if not rm.is_tree_edge(u, v))
        assert rm.edge_status(u, v) is EdgeStatus.UNKNOWN
        rm.mark_edge(u, v, EdgeStatus.INVALID)
        rm.mark_edge(v, u, EdgeStatus.INVALID)
        with pytest.raises(EdgeStatusError):
            rm.mark_edge(u, v, EdgeStatus.FREE)
        with pytest.raises(EdgeStatusError):
            rm.mark_edge(rm.parent[1], 1, EdgeStatus.INVALID)
        with pytest.raises(ValueError):
            rm.mark_edge(0, 2, EdgeStatus.UNKNOWN)


def test_snapshot_roundtrip():
    rm = make(seed=4)
    rm.grow(30)
    u = next(u for u, _ in rm.neighbors(7) if not rm.is_tree_edge(u, 7))
    rm.mark_edge(u, 7, EdgeStatus.INVALID)
    data = json.loads(json.dumps(rm.to_dict()))
    back = Roadmap.from_dict(data, SC.robot, SC.workspace)
    np.testing.assert_array_equal(back.configs, rm.configs)
    assert back.edges() == rm.edges()
    assert [back.coverage(v) for v in range(30)] == [rm.coverage(v) for v in range(30)]
    rm.grow(10)
    back.grow(10)
    np.testing.assert_array_equal(back.configs, rm.configs)


def test_cached_coverage_matches_sensor():
    from irisplan.robot import sense

    rm = make(seed=12)
    rm.grow(40)
    for v in range(0, 41, 5):
        assert rm.coverage(v) == sense(SC.robot, rm.config(v), SC.workspace)
