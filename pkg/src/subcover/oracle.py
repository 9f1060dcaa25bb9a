"""Brute-force reference implementations used by tests and acceptance runs.

Everything here favors transparency over speed: dense grids, exhaustive
subset enumeration, textbook reachability.  None of it reuses the decision
logic of the module it is meant to validate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .freespace import decide_frechet_subcurve_segment
from .geometry import EdgePoint, Interval, PolyCurve, Segment


@dataclass(frozen=True)
class OracleBudget:
    grid_step: float = 1e-3
    max_subset_size: int = 20
    bisection_tol: float = 1e-7

    def __post_init__(self):
        if self.grid_step <= 0 or self.max_subset_size <= 0 or self.bisection_tol <= 0:
            raise ValueError("budget values must be positive")


# ---------------------------------------------------------------------------
# Frechet distance brackets


def frechet_value_bracket(
    P: PolyCurve, a: EdgePoint, b: EdgePoint, seg: Segment, tol: float
) -> Interval:
    """[lo, hi] with hi - lo <= tol bracketing d_F(P[a,b], seg).

    The decision is false at lo and true at hi (lo may be 0 when the
    distance itself is 0).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    hi = _upper_bound_subcurve(P, a, b, seg)
    if decide_frechet_subcurve_segment(P, a, b, seg, 0.0):
        return Interval(0.0, min(tol, hi))
    lo = 0.0
    hi = max(hi, tol)
    while not decide_frechet_subcurve_segment(P, a, b, seg, hi):
        hi *= 1.0 + 1e-9
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if decide_frechet_subcurve_segment(P, a, b, seg, mid):
            hi = mid
        else:
            lo = mid
    return Interval(lo, hi)


def _upper_bound_subcurve(P: PolyCurve, a: EdgePoint, b: EdgePoint, seg: Segment) -> float:
    pts = [P.edge_point_coords(a), P.edge_point_coords(b)]
    for v in range(a.edge_index + 1, b.edge_index + 1):
        pts.append(P.vertex(v))
    worst = 0.0
    for p in pts:
        worst = max(
            worst,
            float(np.linalg.norm(p - seg.start)),
            float(np.linalg.norm(p - seg.end)),
        )
    return worst


def _ball_lohi(s0: np.ndarray, s1: np.ndarray, c: np.ndarray, dd: float) -> Tuple[float, float]:
    """Clamped parameter interval of segment s0->s1 inside the squared-radius ball."""
    v = s1 - s0
    w = s0 - c
    aa = float(np.dot(v, v))
    if aa == 0.0:
        return (0.0, 1.0) if float(np.dot(w, w)) <= dd else (np.inf, -np.inf)
    bb = 2.0 * float(np.dot(v, w))
    cc = float(np.dot(w, w)) - dd
    disc = bb * bb - 4 * aa * cc
    if disc < 0:
        return (np.inf, -np.inf)
    root = disc**0.5
    lo = max((-bb - root) / (2 * aa), 0.0)
    hi = min((-bb + root) / (2 * aa), 1.0)
    return (lo, hi) if lo <= hi else (np.inf, -np.inf)


def curve_frechet_decision(P: PolyCurve, Q: PolyCurve, delta: float) -> bool:
    """Classic two-curve free-space reachability decision (oracle grade)."""
    if P.num_edges < 1 or Q.num_edges < 1:
        raise ValueError("curves need at least one edge each")
    dd = delta * delta
    PV, QV = P.vertices, Q.vertices
    d0 = PV[0] - QV[0]
    d1 = PV[-1] - QV[-1]
    if float(np.dot(d0, d0)) > dd or float(np.dot(d1, d1)) > dd:
        return False
    ne, me = P.num_edges, Q.num_edges

    INF = np.inf
    # reachable lower ends; +inf means empty (propagating .lo suffices because
    # reachable boundary sets are upward-closed within the free interval)
    rl = np.full((ne + 2, me + 2), INF)  # left boundary of cell (i, j)
    rb = np.full((ne + 2, me + 2), INF)  # bottom boundary of cell (i, j)
    lf_cache = {}
    bf_cache = {}

    def lfree(i: int, j: int) -> Tuple[float, float]:
        key = (i, j)
        got = lf_cache.get(key)
        if got is None:
            got = _ball_lohi(QV[j - 1], QV[j], PV[i - 1], dd)
            lf_cache[key] = got
        return got

    def bfree(i: int, j: int) -> Tuple[float, float]:
        key = (i, j)
        got = bf_cache.get(key)
        if got is None:
            got = _ball_lohi(PV[i - 1], PV[i], QV[j - 1], dd)
            bf_cache[key] = got
        return got

    l0 = lfree(1, 1)
    if l0[0] <= 0.0 <= l0[1]:
        rl[1, 1] = 0.0
    b0 = bfree(1, 1)
    if b0[0] <= 0.0 <= b0[1]:
        rb[1, 1] = 0.0
    for i in range(1, ne + 1):
        for j in range(1, me + 1):
            cl, cb = rl[i, j], rb[i, j]
            if cl == INF and cb == INF:
                continue
            if i == ne and j == me:
                return True
            flo, fhi = lfree(i + 1, j)
            if flo <= fhi:
                if cb < INF:
                    rl[i + 1, j] = min(rl[i + 1, j], flo)
                else:
                    lo = max(flo, cl)
                    if lo <= fhi:
                        rl[i + 1, j] = min(rl[i + 1, j], lo)
            flo, fhi = bfree(i, j + 1)
            if flo <= fhi:
                if cl < INF:
                    rb[i, j + 1] = min(rb[i, j + 1], flo)
                else:
                    lo = max(flo, cb)
                    if lo <= fhi:
                        rb[i, j + 1] = min(rb[i, j + 1], lo)
    return False


def curve_frechet_bracket(P: PolyCurve, Q: PolyCurve, tol: float) -> Interval:
    """[lo, hi] with hi - lo <= tol bracketing the two-curve Frechet distance."""
    pts = np.vstack([P.vertices, Q.vertices])
    hi = float(np.max(np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)))
    if curve_frechet_decision(P, Q, 0.0):
        return Interval(0.0, min(tol, hi))
    lo = 0.0
    hi = max(hi, tol)
    while not curve_frechet_decision(P, Q, hi):
        hi *= 1.0 + 1e-9
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if curve_frechet_decision(P, Q, mid):
            hi = mid
        else:
            lo = mid
    return Interval(lo, hi)


# ---------------------------------------------------------------------------
# grid traversal search


def psi_contains_brute(
    P: PolyCurve,
    i: int,
    j: int,
    t: EdgePoint,
    seg: Segment,
    delta: float,
    nx: int = 160,
    ny: int = 160,
) -> bool:
    """Grid search for a monotone traversal witnessing window membership.

    Discretizes the joint parameter space of P[t_i, t_j] and seg and runs
    monotone reachability from admissible starts (on edge i, left of t) to
    admissible ends (on edge j-1, right of t).  Subject to grid resolution;
    assert with margins.
    """
    tau = P.edge_point_param(t)
    x_lo, x_hi = P.param(i), P.param(j)
    xs = np.linspace(x_lo, x_hi, nx)
    ys = np.linspace(0.0, 1.0, ny)
    p_pts = np.array([P.eval(x) for x in xs])
    q_pts = seg.start[None, :] + ys[:, None] * (seg.end - seg.start)[None, :]
    d2 = ((p_pts[:, None, :] - q_pts[None, :, :]) ** 2).sum(axis=2)
    free = d2 <= delta * delta + 1e-12

    start_ok = (xs >= x_lo - 1e-12) & (xs <= min(tau, P.param(min(i + 1, P.n))) + 1e-12)
    end_ok = (xs >= max(tau, P.param(j - 1)) - 1e-12) & (xs <= x_hi + 1e-12)

    reach = np.zeros_like(free)
    idx = np.arange(ny)
    for k in range(nx):
        row_free = free[k]
        entry = np.zeros(ny, dtype=bool)
        if k > 0:
            entry |= reach[k - 1]
            entry[1:] |= reach[k - 1][:-1]
        if start_ok[k]:
            entry[0] |= row_free[0]
        seeds = entry & row_free
        seed_pos = np.where(seeds, idx, ny + 1)
        first_seed = np.minimum.accumulate(seed_pos)
        last_block = np.maximum.accumulate(np.where(~row_free, idx, -1))
        reach[k] = row_free & (first_seed <= idx) & (first_seed > last_block)
    return bool(np.any(reach[end_ok][:, ny - 1]))


def covered_params_brute(
    P: PolyCurve,
    windows: Sequence[Tuple[int, int]],
    seg: Segment,
    delta: float,
    params: Sequence[float],
    nx: int = 160,
    ny: int = 160,
) -> List[bool]:
    """For each curve parameter, whether some window's traversal covers it."""
    from .freespace import _t_in_window

    out = []
    for g in params:
        ep = P.locate(g)
        hit = False
        for (i, j) in windows:
            if not _t_in_window(ep, i, j):
                continue
            if psi_contains_brute(P, i, j, ep, seg, delta, nx, ny):
                hit = True
                break
        out.append(hit)
    return out


# ---------------------------------------------------------------------------
# coverage oracles

from .coverage import covers_unit, merge_intervals  # noqa: E402


def full_coverage(P: PolyCurve, C: Sequence[Segment], delta: float) -> List[Interval]:
    """Union of coverage intervals over all edge windows 1 <= i <= j <= n-1.

    Unrestricted window spans; used to check end-to-end guarantees on the
    input curve.  O(n^2 |C|), desk scale only.
    """
    ivs: List[Interval] = []
    for q in C:
        ivs.extend(_coverage_all_windows_one(P, q, delta))
    return merge_intervals(ivs)


def _coverage_all_windows_one(P: PolyCurve, q: Segment, delta: float) -> List[Interval]:
    """Coverage intervals of one segment over all (i, j) edge windows."""
    ne = P.num_edges
    V = P.vertices
    E0, E1 = V[:-1], V[1:]
    dd = delta * delta

    def edge_ball(center: np.ndarray):
        v = E1 - E0
        w = E0 - center[None, :]
        aa = (v * v).sum(axis=1)
        bb = 2.0 * (v * w).sum(axis=1)
        cc = (w * w).sum(axis=1) - dd
        disc = bb * bb - 4 * aa * cc
        safe = np.where(aa == 0, 1.0, aa)
        root = np.sqrt(np.maximum(disc, 0.0))
        lo = np.maximum((-bb - root) / (2 * safe), 0.0)
        hi = np.minimum((-bb + root) / (2 * safe), 1.0)
        degen = aa == 0
        inside = cc <= 0
        lo = np.where(degen, 0.0, lo)
        hi = np.where(degen, 1.0, hi)
        ok = np.where(degen, inside, (disc >= 0) & (lo <= hi))
        return ok, lo, hi

    bot_ok, bot_lo, _ = edge_ball(q.start)
    top_ok, _, top_hi = edge_ball(q.end)

    # vertical free intervals at internal vertices 2..n-1 (index v-2 below)
    sv = q.end - q.start
    aa = float(np.dot(sv, sv))
    w = V[1:-1] - q.start[None, :]
    if aa == 0.0:
        inside = (w * w).sum(axis=1) <= dd
        c_lo = np.where(inside, 0.0, np.inf)
        c_hi = np.where(inside, 1.0, -np.inf)
    else:
        bb = -2.0 * (w * sv[None, :]).sum(axis=1)
        cc = (w * w).sum(axis=1) - dd
        disc = bb * bb - 4 * aa * cc
        root = np.sqrt(np.maximum(disc, 0.0))
        c_lo = np.maximum((-bb - root) / (2 * aa), 0.0)
        c_hi = np.minimum((-bb + root) / (2 * aa), 1.0)
        bad = (disc < 0) | (c_lo > c_hi)
        c_lo = np.where(bad, np.inf, c_lo)
        c_hi = np.where(bad, -np.inf, c_hi)

    params = P.vertex_params
    widths = np.diff(params)
    lo_glob = params[:-1] + bot_lo * widths
    hi_glob = params[:-1] + top_hi * widths

    out: List[Interval] = []
    for i in range(1, ne + 1):
        if not bot_ok[i - 1]:
            continue
        best_hi = -np.inf
        if top_ok[i - 1] and bot_lo[i - 1] <= top_hi[i - 1]:
            best_hi = hi_glob[i - 1]
        cur = 0.0
        for j in range(i + 1, ne + 1):
            vi = j - 2  # vertical at vertex j
            if c_lo[vi] > c_hi[vi]:
                break
            cur = max(cur, c_lo[vi])
            if cur > c_hi[vi]:
                break
            if top_ok[j - 1]:
                best_hi = max(best_hi, hi_glob[j - 1])
        if best_hi > -np.inf:
            out.append(Interval(float(lo_glob[i - 1]), float(best_hi)))
    return out


def min_cover_exhaustive(
    S: PolyCurve, B: Sequence, delta: float, budget: OracleBudget = OracleBudget()
) -> Optional[int]:
    """Smallest subset of B whose structured coverage is [0,1]; None if over budget."""
    from .coverage import candidate_coverage_intervals

    if len(B) > budget.max_subset_size:
        return None
    segs = [c.segment(S) if hasattr(c, "segment") else c for c in B]
    per = [candidate_coverage_intervals(S, s, delta) for s in segs]
    nonempty = [idx for idx, ivs in enumerate(per) if ivs]
    for size in range(1, len(nonempty) + 1):
        for combo in itertools.combinations(nonempty, size):
            pool: List[Interval] = []
            for idx in combo:
                pool.extend(per[idx])
            if covers_unit(pool):
                return size
    return None


def grid_feasibility(
    S: PolyCurve, t: EdgePoint, edge: int, delta: float, step: float
) -> List[Tuple[float, float]]:
    """All (alpha, beta) grid points whose subsegment of the edge covers t.

    Brute force through the window membership predicate; independent of the
    rectangle construction it validates.
    """
    from .coverage import window_set
    from .freespace import _t_in_window, psi_ij_contains

    if step <= 0:
        raise ValueError("step must be positive")
    e = S.edge(edge)
    vals = np.arange(0.0, 1.0 + step * 0.5, step)
    wins = [w for w in window_set(S, t) if _t_in_window(t, *w)]
    pts = e.start[None, :] + vals[:, None] * (e.end - e.start)[None, :]
    out = []
    for ai, a in enumerate(vals):
        for bi, b in enumerate(vals):
            q = Segment(pts[ai], pts[bi])
            if any(psi_ij_contains(S, i, j, t, q, delta) for (i, j) in wins):
                out.append((float(a), float(b)))
    return out
