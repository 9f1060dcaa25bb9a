"""Structured coverage, uncovered-point search, feasibility and feasible-set
rectangles.

The canonical window convention: a window is a vertex pair (i, j) with
1 <= j - i <= 4, meaning traversals start on edge i and end on edge j-1.
In edge terms that is a pair of edges (i, j') with 0 <= j' - i <= 3.  The
same convention is used by every operation here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .freespace import (
    FreeSpaceRow,
    _coverage_interval_on_row,
    _end_lower,
    _start_upper,
    _sweep_crossings,
    coverage_interval,
    psi_ij_contains,
)
from .geometry import (
    EdgePoint,
    Interval,
    PolyCurve,
    RadInterval,
    Segment,
    ball_segment_radical,
    capsule_segment_radical,
)
from .radicals import Radical, rad_max, rad_min

MAX_WINDOW_EDGES = 4  # traversal subcurves span at most this many edges

CoverageSet = List[Interval]


def merge_intervals(ivs: Sequence[Interval], slack: float = 0.0) -> CoverageSet:
    """Sorted union of closed intervals; gaps of at most slack are absorbed."""
    xs = sorted([iv for iv in ivs if not iv.is_empty()], key=lambda v: (v.lo, v.hi))
    out: List[Interval] = []
    for iv in xs:
        if out and iv.lo <= out[-1].hi + slack:
            if iv.hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, iv.hi)
        else:
            out.append(iv)
    return out


def covers_unit(ivs: Sequence[Interval], slack: float = 1e-9) -> bool:
    merged = merge_intervals(ivs, slack)
    return len(merged) == 1 and merged[0].lo <= slack and merged[0].hi >= 1.0 - slack


def coverage_measure(ivs: Sequence[Interval]) -> float:
    return sum(iv.length() for iv in merge_intervals(ivs))


def window_set(S: PolyCurve, t: EdgePoint) -> List[Tuple[int, int]]:
    """Vertex windows that can cover t: start edge within 3 left of t's edge,
    at most four edges long.  At most 10 windows."""
    n = S.n
    ip = t.edge_index
    wins = []
    for i in range(max(ip - 3, 1), ip + 1):
        for j in range(ip + 1, min(i + MAX_WINDOW_EDGES, n) + 1):
            wins.append((i, j))
    return wins


def structured_coverage(S: PolyCurve, C: Sequence[Segment], delta: float) -> CoverageSet:
    """Union of coverage intervals over all centers and short edge windows."""
    ivs: List[Interval] = []
    for q in C:
        ivs.extend(candidate_coverage_intervals(S, q, delta))
    return merge_intervals(ivs)


def candidate_coverage_intervals(S: PolyCurve, q: Segment, delta: float) -> List[Interval]:
    """Merged structured coverage of a single center segment."""
    ne = S.num_edges
    row = FreeSpaceRow(S, 1, S.n, q, delta)
    ivs = []
    for i in range(1, ne + 1):
        for j in range(i, min(i + MAX_WINDOW_EDGES - 1, ne) + 1):
            iv = _coverage_interval_on_row(row, i, j)
            if not iv.is_empty():
                ivs.append(iv)
    return merge_intervals(ivs)


_GAP_SLACK = 1e-12  # float noise between adjacent window endpoints


def point_not_covered(C: Sequence[Segment], S: PolyCurve, delta: float) -> Optional[EdgePoint]:
    """An edge point inside the largest uncovered gap, or None when covered.

    Returns the midpoint of the largest gap so reruns are reproducible and
    the point stays clear of coverage boundaries.
    """
    return point_not_covered_from_intervals(S, structured_coverage(S, C, delta))


def point_not_covered_from_intervals(
    S: PolyCurve, covered: Sequence[Interval]
) -> Optional[EdgePoint]:
    """Uncovered-gap midpoint for precomputed coverage intervals."""
    merged = merge_intervals(covered, slack=_GAP_SLACK)
    gap = _largest_gap(merged)
    if gap is None:
        return None
    return S.locate(0.5 * (gap[0] + gap[1]))


def _largest_gap(merged: CoverageSet) -> Optional[Tuple[float, float]]:
    gaps: List[Tuple[float, float]] = []
    prev = 0.0
    for iv in merged:
        if iv.lo > prev:
            gaps.append((prev, iv.lo))
        prev = max(prev, iv.hi)
    if prev < 1.0:
        gaps.append((prev, 1.0))
    if not gaps:
        return None
    return max(gaps, key=lambda g: (g[1] - g[0], -g[0]))


def is_feasible(Q: Segment, S: PolyCurve, t: EdgePoint, delta: float) -> bool:
    """Whether the center Q covers the point t under some admissible window."""
    return any(psi_ij_contains(S, i, j, t, Q, delta) for (i, j) in window_set(S, t))


# ---------------------------------------------------------------------------
# feasible-set rectangles


@dataclass(frozen=True)
class FeasibleRectSet:
    """Union of axis-aligned rectangles in the candidate square of one edge.

    A candidate subsegment (alpha, beta) of the edge covers the query point
    iff (alpha, beta) lies in one of the rectangles.  Forward and reversed
    orientations contribute separate rectangles.
    """

    edge_index: int
    rects: Tuple[Tuple[float, float, float, float], ...]  # (a1, a2, b1, b2)

    def contains(self, alpha: float, beta: float) -> bool:
        return any(a1 <= alpha <= a2 and b1 <= beta <= b2 for a1, a2, b1, b2 in self.rects)

    def boundary_distance(self, alpha: float, beta: float) -> float:
        """Distance from the point to the nearest rectangle boundary line."""
        best = np.inf
        for a1, a2, b1, b2 in self.rects:
            for v in (a1, a2):
                best = min(best, abs(alpha - v))
            for v in (b1, b2):
                best = min(best, abs(beta - v))
        return float(best)


def _cell_x_at_height(
    S: PolyCurve, cell: int, point: np.ndarray, delta: float, leftmost: bool
) -> Radical:
    """Global curve parameter of the extreme free point of a cell at one height.

    The height is given by the segment point realizing it.  At a tangency
    the ball interval can round to empty; the projection of the point onto
    the cell's edge is the exact limit then.
    """
    edge = S.edge(cell)
    iv = ball_segment_radical(edge.start, edge.end, point, delta)
    if not iv.empty:
        local = iv.lo if leftmost else iv.hi
    else:
        v = edge.direction()
        vv = float(np.dot(v, v))
        u = 0.0 if vv == 0.0 else float(np.dot(point - edge.start, v)) / vv
        local = Radical.exact(min(max(u, 0.0), 1.0))
    return local.affine(S.edge_width(cell), S.param(cell))


def _window_rect(
    S: PolyCurve,
    row: FreeSpaceRow,
    cap_cache: dict,
    t_slice: RadInterval,
    tau: float,
    i: int,
    j: int,
    e: Segment,
    delta: float,
) -> Optional[Tuple[Radical, Radical, Radical, Radical]]:
    """Rectangle of (alpha, beta) with t coverable under vertex window (i, j).

    Built from the vertical free-space intervals at internal vertices, the
    free interval at the query point, and the extreme points of the first
    and last cell of the window.
    """
    if t_slice.empty:
        return None
    verts = []
    for v in range(i + 1, j):
        iv = row.vertical(v)
        if iv.empty:
            return None
        verts.append(iv)
    if j - i == 3 and not verts[0].lo.le(verts[1].hi):
        return None

    def cell_cap(c: int) -> RadInterval:
        got = cap_cache.get(c)
        if got is None:
            got = capsule_segment_radical(S.edge(c), e, delta)
            cap_cache[c] = got
        return got

    cap_i = cell_cap(i)
    cap_j = cell_cap(j - 1)
    if cap_i.empty or cap_j.empty:
        return None
    tau_rad = Radical.exact(tau)

    # lowest point of the first cell: y = cap_i.lo, leftmost x at that height
    a_l = cap_i.lo
    a_i_glob = _cell_x_at_height(S, i, e.at(a_l.value()), delta, leftmost=True)
    alpha1 = t_slice.lo if tau_rad.le(a_i_glob) else a_l

    # highest point of the last cell: y = cap_j.hi, rightmost x at that height
    b_u = cap_j.hi
    b_j_glob = _cell_x_at_height(S, j - 1, e.at(b_u.value()), delta, leftmost=False)
    beta2 = t_slice.hi if b_j_glob.le(tau_rad) else b_u

    alpha2 = rad_min(*[iv.hi for iv in verts], t_slice.hi)
    beta1 = rad_max(*[iv.lo for iv in verts], t_slice.lo)
    if not alpha1.le(alpha2) or not beta1.le(beta2):
        return None
    return (alpha1, alpha2, beta1, beta2)


def feasible_rectangles(S: PolyCurve, t: EdgePoint, edge: int, delta: float) -> FeasibleRectSet:
    """Rectangles of candidate parameters on the edge that cover t.

    Per window the construction runs twice: against the edge as given and
    against the reversed edge with parameters mirrored back, which yields the
    reversed-orientation region of the feasible set.
    """
    if not 1 <= edge <= S.num_edges:
        raise IndexError("edge index out of range")
    e = S.edge(edge)
    e_rev = e.reversed()
    tau = S.edge_point_param(t)
    pt = S.edge_point_coords(t)
    rects: List[Tuple[float, float, float, float]] = []
    from .freespace import _t_in_window

    for orient, seg in (("fwd", e), ("rev", e_rev)):
        row = FreeSpaceRow(S, 1, S.n, seg, delta)
        t_slice = ball_segment_radical(seg.start, seg.end, pt, delta)
        cap_cache: dict = {}
        for (i, j) in window_set(S, t):
            if not _t_in_window(t, i, j):  # pragma: no cover - windows are valid by construction
                continue
            rect = _window_rect(S, row, cap_cache, t_slice, tau, i, j, seg, delta)
            if rect is None:
                continue
            a1, a2, b1, b2 = rect
            if orient == "rev":
                a1, a2 = a2.reflect(), a1.reflect()
                b1, b2 = b2.reflect(), b1.reflect()
            quad = (a1.value(), a2.value(), b1.value(), b2.value())
            if quad not in rects:
                rects.append(quad)
    return FeasibleRectSet(edge, tuple(rects))


# ---------------------------------------------------------------------------
# vectorized helpers for the sampling loops
#
# The scalar operations above are the contract; the helpers below evaluate
# the same window logic across many candidate segments at once with float
# comparisons.  They are cross-checked against the scalar path in the tests.


def _ball_rows(e0: np.ndarray, e1: np.ndarray, centers: np.ndarray, dd: float):
    """Clamped quadratic sublevel intervals of one edge against many centers."""
    v = e1 - e0
    aa = float(np.dot(v, v))
    w = e0[None, :] - centers
    if aa == 0.0:
        inside = (w * w).sum(axis=1) <= dd
        lo = np.where(inside, 0.0, np.inf)
        hi = np.where(inside, 1.0, -np.inf)
        return inside, lo, hi
    bb = 2.0 * (w @ v)
    cc = (w * w).sum(axis=1) - dd
    disc = bb * bb - 4 * aa * cc
    ok = disc >= 0
    root = np.sqrt(np.maximum(disc, 0.0))
    lo = np.maximum((-bb - root) / (2 * aa), 0.0)
    hi = np.minimum((-bb + root) / (2 * aa), 1.0)
    ok &= lo <= hi
    return ok, np.where(ok, lo, np.inf), np.where(ok, hi, -np.inf)


def _ball_on_candidates(starts: np.ndarray, ends: np.ndarray, center: np.ndarray, dd: float):
    """Sublevel intervals on many candidate segments against one center."""
    v = ends - starts
    w = starts - center[None, :]
    aa = (v * v).sum(axis=1)
    bb = 2.0 * (v * w).sum(axis=1)
    cc = (w * w).sum(axis=1) - dd
    degen = aa == 0.0
    safe = np.where(degen, 1.0, aa)
    disc = bb * bb - 4 * aa * cc
    ok = disc >= 0
    root = np.sqrt(np.maximum(disc, 0.0))
    lo = np.maximum((-bb - root) / (2 * safe), 0.0)
    hi = np.minimum((-bb + root) / (2 * safe), 1.0)
    inside = cc <= 0
    lo = np.where(degen, np.where(inside, 0.0, np.inf), lo)
    hi = np.where(degen, np.where(inside, 1.0, -np.inf), hi)
    ok = np.where(degen, inside, ok & (lo <= hi))
    return ok, np.where(ok, lo, np.inf), np.where(ok, hi, -np.inf)


def batch_candidate_coverage(
    S: PolyCurve, starts: np.ndarray, ends: np.ndarray, delta: float
) -> List[List[Interval]]:
    """Structured coverage intervals for many candidate segments at once."""
    N = starts.shape[0]
    ne = S.num_edges
    dd = delta * delta
    params = S.vertex_params
    V = S.vertices

    bot_ok = np.empty((ne, N), dtype=bool)
    bot_lo = np.empty((ne, N))
    top_ok = np.empty((ne, N), dtype=bool)
    top_hi = np.empty((ne, N))
    for i in range(ne):
        vdir = V[i + 1] - V[i]
        aa = float(np.dot(vdir, vdir))
        for (arr_ok, arr_val, centers, take_hi) in (
            (bot_ok, bot_lo, starts, False),
            (top_ok, top_hi, ends, True),
        ):
            w = V[i][None, :] - centers
            if aa == 0.0:
                inside = (w * w).sum(axis=1) <= dd
                arr_ok[i] = inside
                arr_val[i] = np.where(inside, 1.0 if take_hi else 0.0, np.nan)
                continue
            bb = 2.0 * (w @ vdir)
            cc = (w * w).sum(axis=1) - dd
            disc = bb * bb - 4 * aa * cc
            ok = disc >= 0
            root = np.sqrt(np.maximum(disc, 0.0))
            lo = np.maximum((-bb - root) / (2 * aa), 0.0)
            hi = np.minimum((-bb + root) / (2 * aa), 1.0)
            ok &= lo <= hi
            arr_ok[i] = ok
            arr_val[i] = hi if take_hi else lo

    # vertical intervals at vertices 2..n-1 on each candidate segment
    vert_ok = np.empty((max(ne - 1, 0), N), dtype=bool)
    vert_lo = np.empty((max(ne - 1, 0), N))
    vert_hi = np.empty((max(ne - 1, 0), N))
    for v in range(2, ne + 1):
        ok, lo, hi = _ball_on_candidates(starts, ends, V[v - 1], dd)
        vert_ok[v - 2] = ok
        vert_lo[v - 2] = lo
        vert_hi[v - 2] = hi

    widths = np.diff(params)
    out: List[List[Interval]] = [[] for _ in range(N)]
    for i in range(1, ne + 1):
        start_ok = bot_ok[i - 1]
        if not start_ok.any():
            continue
        lo_glob = params[i - 1] + bot_lo[i - 1] * widths[i - 1]
        alive = start_ok.copy()
        cur = np.zeros(N)
        for j in range(i, min(i + MAX_WINDOW_EDGES - 1, ne) + 1):
            if j > i:
                k = j - 2  # vertical at vertex j
                alive &= vert_ok[k]
                cur = np.maximum(cur, vert_lo[k])
                alive &= cur <= vert_hi[k]
                if not alive.any():
                    break
            ok_ij = alive & top_ok[j - 1]
            if j == i:
                ok_ij &= bot_lo[i - 1] <= top_hi[i - 1]
            if not ok_ij.any():
                continue
            hi_glob = params[j - 1] + top_hi[j - 1] * widths[j - 1]
            for idx in np.nonzero(ok_ij)[0]:
                out[idx].append(Interval(float(lo_glob[idx]), float(hi_glob[idx])))
    return [merge_intervals(ivs) for ivs in out]


def batch_feasible_mask(
    S: PolyCurve, t: EdgePoint, starts: np.ndarray, ends: np.ndarray, delta: float
) -> np.ndarray:
    """is_feasible evaluated for many candidate segments at once."""
    N = starts.shape[0]
    dd = delta * delta
    feas = np.zeros(N, dtype=bool)
    pt = S.edge_point_coords(t)
    vert_cache: dict = {}

    def vertical(v: int):
        got = vert_cache.get(v)
        if got is None:
            got = _ball_on_candidates(starts, ends, S.vertex(v), dd)
            vert_cache[v] = got
        return got

    for (i, j) in window_set(S, t):
        e_i = S.edge(i)
        # bottom of cell i against candidate starts
        okb, lob, _ = _ball_rows(e_i.start, e_i.end, starts, dd)
        su = float(_start_upper(t, i).value())
        okb = okb & (lob <= su)
        if not okb.any():
            continue
        e_j = S.edge(j - 1)
        okt, _, hit = _ball_rows(e_j.start, e_j.end, ends, dd)
        el = float(_end_lower(t, j - 1).value())
        okt = okt & (hit >= el)
        mask = okb & okt & ~feas
        if not mask.any():
            continue
        cur = np.zeros(N)
        alive = mask
        for v in range(i + 1, j):
            okv, lov, hiv = vertical(v)
            alive = alive & okv
            cur = np.maximum(cur, lov)
            alive = alive & (cur <= hiv)
            if not alive.any():
                break
        feas |= alive
    return feas
