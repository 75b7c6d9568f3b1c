import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irisplan.robot import (
    RobotModel,
    angular_difference,
    config_collision_free,
    configs_collision_free,
    distance,
    edge_collision_free,
    forward_kinematics,
    interpolate,
    interpolation_steps,
    sense,
    steer,
    wrap_angles,
)
from irisplan.scenario import Rect, Workspace2D, segment_hits_rectangle

UNIT = RobotModel(link_lengths=(1.0,) * 5)


def _fk_oracle(lengths, q, base=(0.0, 0.0)):
    """Chain of homogeneous transforms, one rotation then one translation per link."""
    T = np.array([[1.0, 0.0, base[0]], [0.0, 1.0, base[1]], [0.0, 0.0, 1.0]])
    pts = [T[:2, 2].copy()]
    for L, a in zip(lengths, q):
        c, s = math.cos(a), math.sin(a)
        T = T @ np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]) @ np.array([[1.0, 0.0, L], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        pts.append(T[:2, 2].copy())
    return np.array(pts), math.atan2(T[1, 0], T[0, 0])


def _free_oracle(m, q, w):
    pts, _ = _fk_oracle(m.link_lengths, q, m.base)
    b = w.bounds
    if any(not b.contains(p) for p in pts):
        return False
    segs = [(tuple(pts[i]), tuple(pts[i + 1])) for i in range(len(pts) - 1)]
    return not any(segment_hits_rectangle(s, r) for s in segs for r in w.obstacles)


class TestKinematics:
    def test_bent_example(self):
        links, pose = forward_kinematics(UNIT, (math.pi / 2, -math.pi / 2, 0, 0, 0))
        np.testing.assert_allclose(pose.origin, (4.0, 1.0), atol=1e-12)
        np.testing.assert_allclose(pose.direction, (1.0, 0.0), atol=1e-12)
        np.testing.assert_allclose(links[0], ((0, 0), (0, 1)), atol=1e-12)

    def test_against_transform_chain(self):
        rng = np.random.default_rng(3)
        m = RobotModel(base=(0.5, -1.0), link_lengths=(0.8, 1.2, 0.5, 0.9, 0.3))
        for q in rng.uniform(-math.pi, math.pi, size=(200, 5)):
            links, pose = forward_kinematics(m, q)
            pts, heading = _fk_oracle(m.link_lengths, q, m.base)
            np.testing.assert_allclose([links[0][0]] + [l[1] for l in links], pts, atol=1e-12)
            np.testing.assert_allclose(pose.direction, (math.cos(heading), math.sin(heading)), atol=1e-12)

    def test_wrap(self):
        out = wrap_angles([math.pi, -math.pi, 3 * math.pi, 0.5])
        np.testing.assert_allclose(out, [-math.pi, -math.pi, -math.pi, 0.5])
        assert np.all(out < math.pi)


class TestCollision:
    W = Workspace2D(10.0, [(1.5, 1.0, 2.5, 3.0), (-3.0, -3.5, -1.0, -2.5)], [(5.0, 0.0)])

    def test_examples(self):
        assert config_collision_free(UNIT, np.zeros(5), self.W)
        # tip at (6, 0) leaves the 10x10 square
        assert not config_collision_free(RobotModel(link_lengths=(1.2,) * 5), np.zeros(5), self.W)
        # straight up along x = 0 then bent across the first obstacle
        assert not config_collision_free(UNIT, (math.pi / 2, -math.pi / 2, 0, 0, 0), self.W)

    def test_batch_matches_oracle(self):
        rng = np.random.default_rng(8)
        qs = rng.uniform(-math.pi, math.pi, size=(400, 5))
        got = configs_collision_free(UNIT, qs, self.W)
        want = [_free_oracle(UNIT, q, self.W) for q in qs]
        assert got.tolist() == want
        assert 0 < sum(want) < len(want)

    def test_edge_against_finer_sampling(self):
        rng = np.random.default_rng(21)
        res = 0.05
        agree = 0
        trials = 150
        for _ in range(trials):
            qa = rng.uniform(-math.pi, math.pi, 5)
            qb = steer(qa, rng.uniform(-math.pi, math.pi, 5), 0.5)
            coarse = edge_collision_free(UNIT, qa, qb, self.W, res)
            n = 8 * interpolation_steps(qa, qb, res)
            d = angular_difference(qa, qb)
            fine = all(_free_oracle(UNIT, qa + t * d, self.W) for t in np.linspace(0, 1, n + 1))
            # nested samples: a fine pass implies a coarse pass
            if fine:
                assert coarse
            agree += coarse == fine
        assert agree >= 0.95 * trials

    def test_halving_resolution_is_monotone(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            qa = rng.uniform(-math.pi, math.pi, 5)
            qb = steer(qa, rng.uniform(-math.pi, math.pi, 5), 0.5)
            if not edge_collision_free(UNIT, qa, qb, self.W, 0.1):
                assert not edge_collision_free(UNIT, qa, qb, self.W, 0.05)

    def test_sample_spacing(self):
        qa = np.array([3.0, 0, 0, 0, 0])
        qb = np.array([-3.0, 0.1, 0, 0, 0])
        n = interpolation_steps(qa, qb, 0.05)
        pts = interpolate(qa, qb, n)
        gaps = np.abs(angular_difference(pts[:-1], pts[1:])).max(axis=1)
        assert gaps.max() <= 0.05 + 1e-12
        np.testing.assert_allclose(pts[-1], wrap_angles(qb), atol=1e-12)


class TestMetric:
    def test_wraparound(self):
        a = np.array([math.pi - 0.1, 0, 0, 0, 0])
        b = np.array([-math.pi + 0.1, 0, 0, 0, 0])
        assert distance(a, b) == pytest.approx(0.2, abs=1e-12)

    angles = st.lists(st.floats(-10, 10), min_size=5, max_size=5)

    @given(angles, angles, angles)
    def test_triangle_and_symmetry(self, a, b, c):
        assert distance(a, b) == distance(b, a)
        assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9
        assert distance(a, a) == 0.0

    @given(angles, angles, st.floats(0.01, 1.0))
    def test_steer_bounded(self, a, b, step):
        q = steer(wrap_angles(a), wrap_angles(b), step)
        assert np.abs(angular_difference(wrap_angles(a), q)).max() <= step + 1e-9


def test_sense_sees_wall_ahead():
    w = Workspace2D(10.0, [], [(5.0, 0.0), (-5.0, 0.0), (5.0, 4.0)])
    assert sense(RobotModel(link_lengths=(0.8,) * 5), np.zeros(5), w) == 0b001
