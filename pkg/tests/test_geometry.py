import math

import numpy as np
import pytest

from subcover.geometry import (
    EdgePoint,
    Interval,
    PolyCurve,
    Segment,
    arclength_params,
    ball_segment_intersection,
    capsule_segment_intersection,
    curve_from_points,
    point_segment_dist_sq,
    segment_segment_dist_sq,
)


def test_eval_midpoint():
    P = curve_from_points([(0, 0), (2, 0)])
    assert np.allclose(P.eval(0.5), (1, 0))


def test_eval_endpoint():
    P = curve_from_points([(0, 0), (1, 0), (2, 2)])
    assert np.allclose(P.eval(0.0), (0, 0))


def test_eval_nonuniform_params():
    P = curve_from_points([(0, 0), (1, 0), (2, 2)], params=[0, 0.5, 1])
    assert np.allclose(P.eval(0.75), (1.5, 1))


def test_eval_domain_error():
    P = curve_from_points([(0, 0), (2, 0)])
    with pytest.raises(ValueError):
        P.eval(1.5)


def test_vertex_params_validation():
    with pytest.raises(ValueError):
        PolyCurve([(0, 0), (1, 0)], vertex_params=[0.0, 0.5])
    with pytest.raises(ValueError):
        PolyCurve([(0, 0), (1, 0), (2, 0)], vertex_params=[0.0, 0.0, 1.0])


def test_ball_segment_examples():
    iv = ball_segment_intersection((0, 0), (10, 0), (5, 3), 5)
    assert abs(iv.lo - 0.1) < 1e-12 and abs(iv.hi - 0.9) < 1e-12

    assert ball_segment_intersection((0, 0), (10, 0), (5, 10), 1).is_empty()

    iv = ball_segment_intersection((0, 0), (1, 0), (0, 0), 0)
    assert abs(iv.lo) < 1e-12 and abs(iv.hi) < 1e-12


def test_ball_segment_degenerate_segment():
    assert ball_segment_intersection((1, 1), (1, 1), (1, 1.5), 1) == Interval(0.0, 1.0)
    assert ball_segment_intersection((1, 1), (1, 1), (5, 5), 1).is_empty()


def test_ball_segment_negative_delta():
    with pytest.raises(ValueError):
        ball_segment_intersection((0, 0), (1, 0), (0, 0), -1)


def test_ball_segment_membership_oracle():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        d = rng.integers(2, 4)
        p, q, r = rng.normal(size=d), rng.normal(size=d), rng.normal(size=d)
        delta = abs(rng.normal()) + 0.01
        iv = ball_segment_intersection(p, q, r, delta)
        for t in rng.uniform(0, 1, size=12):
            dist = np.linalg.norm((1 - t) * p + t * q - r)
            if iv.contains(t):
                assert dist <= delta + 1e-9
            else:
                assert dist > delta - 1e-9


def test_capsule_examples():
    iv = capsule_segment_intersection(Segment((0, 0), (10, 0)), Segment((0, 1), (10, 1)), 2)
    assert abs(iv.lo) < 1e-12 and abs(iv.hi - 1) < 1e-12

    assert capsule_segment_intersection(
        Segment((0, 0), (10, 0)), Segment((0, 5), (10, 5)), 2
    ).is_empty()

    iv = capsule_segment_intersection(Segment((0, 0), (0, 0)), Segment((-1, 0), (1, 0)), 0.5)
    assert abs(iv.lo - 0.25) < 1e-12 and abs(iv.hi - 0.75) < 1e-12


def test_capsule_against_dense_sampling():
    rng = np.random.default_rng(5)
    for _ in range(120):
        d = int(rng.integers(2, 4))
        ab = Segment(rng.normal(size=d), rng.normal(size=d))
        pq = Segment(rng.normal(size=d), rng.normal(size=d))
        delta = abs(rng.normal()) * 0.8 + 0.05
        iv = capsule_segment_intersection(ab, pq, delta)
        ts = np.arange(0.0, 1.0 + 1e-12, 1e-3)
        dists = np.sqrt([point_segment_dist_sq(pq.at(t), ab.start, ab.end) for t in ts])
        inside = dists <= delta
        for t, ok in zip(ts, inside):
            if iv.contains(t):
                assert math.sqrt(point_segment_dist_sq(pq.at(t), ab.start, ab.end)) <= delta + 1e-9
            elif ok:
                # points the kernel excludes must sit within 1e-4 of the boundary
                assert min(abs(t - iv.lo), abs(t - iv.hi)) < 1e-3 or math.sqrt(
                    point_segment_dist_sq(pq.at(t), ab.start, ab.end)
                ) > delta - 1e-9


def test_segment_segment_distance():
    s1 = Segment((0, 0), (1, 0))
    s2 = Segment((0, 1), (1, 1))
    assert abs(segment_segment_dist_sq(s1, s2) - 1.0) < 1e-12
    s3 = Segment((0.5, -1), (0.5, 1))  # crossing
    assert segment_segment_dist_sq(s1, s3) < 1e-12
    s4 = Segment((3, 4), (3, 4))  # degenerate
    assert abs(segment_segment_dist_sq(s1, s4) - (2 * 2 + 4 * 4)) < 1e-12


def test_arclength_params():
    pts = np.array([(0, 0), (1, 0), (3, 0)], dtype=float)
    t = arclength_params(pts)
    assert np.allclose(t, [0, 1 / 3, 1])
    same = np.zeros((3, 2))
    assert np.allclose(arclength_params(same), [0, 0.5, 1])


def test_subcurve_and_reverse():
    P = curve_from_points([(0, 0), (1, 0), (2, 0), (3, 0)])
    sub = P.subcurve(EdgePoint(1, 0.5), EdgePoint(3, 0.5))
    assert np.allclose(sub.vertices[0], (0.5, 0))
    assert np.allclose(sub.vertices[-1], (2.5, 0))
    R = P.reversed()
    assert np.allclose(R.vertices[0], (3, 0))
    assert np.allclose(R.eval(0.0), P.eval(1.0))


def test_locate_roundtrip():
    P = curve_from_points([(0, 0), (1, 0), (2, 2)], params=[0, 0.25, 1])
    ep = P.locate(0.7)
    assert ep.edge_index == 2
    assert abs(P.edge_point_param(ep) - 0.7) < 1e-12
