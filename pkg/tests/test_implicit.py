import numpy as np
import pytest

from subcover.coverage import covers_unit, feasible_rectangles
from subcover.geometry import EdgePoint, PolyCurve, curve_from_points
from subcover.implicit import (
    EdgeGrid,
    build_structure,
    feasible_weight,
    implicit_approx_cover,
    sample_candidate,
)
from subcover.oracle import covers_unit as oracle_covers, full_coverage
from subcover.solver import SolverConfig
from subcover.simplify import simplify_curve


def explicit_weights(arr):
    """Reference: per-candidate doubling counts from the continuous rectangles."""
    S = arr.S
    out = {}
    rect_sets = []
    for t in arr.update_log:
        rect_sets.append(
            {e: feasible_rectangles(S, t, e, arr.feas_delta).rects for e in range(1, S.num_edges + 1)}
        )
    for e in range(1, S.num_edges + 1):
        grid = arr.grids[e - 1]
        vals = grid.values()
        for xi, a in enumerate(vals):
            for yi, b in enumerate(vals):
                s = 0
                for rs in rect_sets:
                    if any(r[0] <= a <= r[1] and r[2] <= b <= r[3] for r in rs[e]):
                        s += 1
                out[(e, xi, yi)] = 1 << s
    return out


def small_curve():
    return curve_from_points([(0, 0), (3, 0), (3, 2)])


def test_grid_construction_covers_unit_interval():
    g = EdgeGrid.for_edge_length(3.0, 1.0)
    assert np.allclose(g.values(), [0, 1 / 3, 2 / 3, 1.0])
    g2 = EdgeGrid.for_edge_length(2.0, 1.0)  # 0, 0.5, 1 exactly on lattice
    assert np.allclose(g2.values(), [0, 0.5, 1.0])
    assert not g2.has_extra
    g3 = EdgeGrid.for_edge_length(0.0, 1.0)
    assert np.allclose(g3.values(), [0, 1.0])


def test_grid_index_range_matches_pointwise():
    rng = np.random.default_rng(40)
    for _ in range(300):
        g = EdgeGrid.for_edge_length(float(rng.uniform(0.1, 5)), float(rng.uniform(0.05, 1.5)))
        vals = g.values()
        lo, hi = sorted(rng.uniform(-0.1, 1.1, size=2))
        r = g.index_range(lo, hi)
        inside = {j for j, v in enumerate(vals) if lo <= v <= hi}
        if r is None:
            assert inside == set()
        else:
            assert inside == set(range(r[0], r[1] + 1))


def test_empty_log_uniform():
    S = small_curve()
    arr = build_structure(S, 0.5, [])
    assert arr.total_weight == sum(g.size**2 for g in arr.grids)
    for e in range(len(arr.grids)):
        assert np.all(arr.scount[e] == 0)


def test_one_update_doubles_rectangle():
    S = small_curve()
    t = EdgePoint(1, 0.5)
    arr = build_structure(S, 0.5, [t], feas_delta=1.0)
    ref = explicit_weights(arr)
    assert arr.total_weight == sum(ref.values())
    assert any(w == 2 for w in ref.values())


def test_weights_equal_explicit_on_random_logs():
    rng = np.random.default_rng(41)
    for trial in range(12):
        n = int(rng.integers(2, 5))
        S = PolyCurve(np.cumsum(rng.normal(size=(n, 2)) * 2, axis=0))
        delta = float(rng.uniform(0.4, 1.2))
        log = [
            S.locate(float(rng.uniform(0, 1)))
            for _ in range(int(rng.integers(1, 5)))
        ]
        arr = build_structure(S, delta, log, feas_delta=2.0 * delta)
        ref = explicit_weights(arr)
        assert arr.total_weight == sum(ref.values())
        # per-candidate probabilities agree exactly
        for (e, xi, yi), w in ref.items():
            assert arr.candidate_probability(e, xi, yi) == w / arr.total_weight


def test_feasible_weight_matches_explicit():
    rng = np.random.default_rng(42)
    for trial in range(10):
        n = int(rng.integers(2, 5))
        S = PolyCurve(np.cumsum(rng.normal(size=(n, 2)) * 2, axis=0))
        delta = float(rng.uniform(0.4, 1.2))
        log = [S.locate(float(rng.uniform(0, 1))) for _ in range(int(rng.integers(0, 4)))]
        arr = build_structure(S, delta, log, feas_delta=2.0 * delta)
        ref = explicit_weights(arr)
        t = S.locate(float(rng.uniform(0, 1)))
        # explicit feasible weight: sum of weights over rect-feasible candidates
        want = 0
        for e in range(1, S.num_edges + 1):
            rects = feasible_rectangles(S, t, e, 2.0 * delta).rects
            vals = arr.grids[e - 1].values()
            for xi, a in enumerate(vals):
                for yi, b in enumerate(vals):
                    if any(r[0] <= a <= r[1] and r[2] <= b <= r[3] for r in rects):
                        want += ref[(e, xi, yi)]
        got = arr.feasible_weight_int(t, 2.0 * delta)
        assert got == want


def test_feasible_weight_bounds():
    S = small_curve()
    arr = build_structure(S, 0.5, [], feas_delta=100.0)
    t = EdgePoint(1, 0.5)
    assert arr.feasible_weight(t, 100.0) == pytest.approx(1.0)
    assert arr.feasible_weight(t, 1e-12) < 1.0
    far = build_structure(S, 0.5, [], feas_delta=1e-9)
    assert far.feasible_weight(EdgePoint(2, 0.9), 1e-9) > 0.0  # self cover survives


def test_rebuild_deterministic():
    S = small_curve()
    log = [EdgePoint(1, 0.3), EdgePoint(2, 0.7)]
    a1 = build_structure(S, 0.5, log, feas_delta=1.0)
    a2 = build_structure(S, 0.5, log, feas_delta=1.0)
    assert a1.total_weight == a2.total_weight
    assert a1._cum == a2._cum


def test_sampler_uniform_tv_distance():
    S = curve_from_points([(0, 0), (2, 0)])
    arr = build_structure(S, 0.5, [])  # 5x5 grid on one edge
    size = arr.grids[0].size
    assert size == 5
    rng = np.random.default_rng(43)
    draws = arr.sample_candidates(100_000, rng)
    counts = {}
    for c in draws:
        key = (round(c.alpha, 9), round(c.beta, 9))
        counts[key] = counts.get(key, 0) + 1
    tv = 0.5 * sum(abs(v / 100_000 - 1 / 25) for v in counts.values())
    tv += 0.5 * (25 - len(counts)) / 25  # unseen cells
    assert tv <= 0.02


def test_sampler_respects_doubling():
    S = curve_from_points([(0, 0), (2, 0)])
    t = EdgePoint(1, 0.5)
    arr = build_structure(S, 2.0, [t], feas_delta=5.0)  # grid {0,1}^2, all feasible
    # every candidate doubled once: uniform again
    rng = np.random.default_rng(44)
    draws = arr.sample_candidates(20_000, rng)
    keys = {(c.alpha, c.beta) for c in draws}
    assert len(keys) == 4


def test_sample_single_candidate_grid():
    S = curve_from_points([(0, 0), (0.5, 0)])
    arr = build_structure(S, 10.0, [])
    rng = np.random.default_rng(45)
    # spacing > 1: grid {0, 1} -> 4 candidates; shrink to the degenerate check
    c = sample_candidate(arr, rng)
    assert c.edge_index == 1


def test_implicit_cover_small_instance():
    P = curve_from_points([(0, 0), (10, 0)])
    res = implicit_approx_cover(P, 1.0, SolverConfig(rng_seed=3, variant="implicit"))
    s = simplify_curve(P, 1.0)
    segs = res.center_segments(s.curve)
    assert oracle_covers(full_coverage(P, segs, 12.0))
    assert res.delta_out == pytest.approx(9.0)


def test_implicit_cover_zigzag():
    pts = [(0, 0), (10, 0), (10, 8), (20, 8)]
    P = curve_from_points(pts)
    res = implicit_approx_cover(P, 1.0, SolverConfig(rng_seed=5, variant="implicit"))
    s = simplify_curve(P, 1.0)
    segs = res.center_segments(s.curve)
    assert oracle_covers(full_coverage(P, segs, 12.0))
