"""Points, segments, polygonal curves and the low-level intersection kernel.

Conventions used throughout the package:

* points are 1-d numpy arrays of length d;
* vertices and edges of a curve are indexed starting from 1, so a curve with
  n vertices has edges 1..n-1 and edge i runs from vertex i to vertex i+1;
* an interval is empty iff lo > hi; the canonical empty interval is
  (+inf, -inf) which makes unions and intersections total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .radicals import ONE, ZERO, Radical, rad_max, rad_min


# ---------------------------------------------------------------------------
# intervals


@dataclass(frozen=True)
class Interval:
    lo: float = math.inf
    hi: float = -math.inf

    @staticmethod
    def empty() -> "Interval":
        return Interval()

    def is_empty(self) -> bool:
        return self.lo > self.hi

    def intersect(self, other: "Interval") -> "Interval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return Interval.empty()
        return Interval(lo, hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def length(self) -> float:
        return 0.0 if self.is_empty() else self.hi - self.lo


class RadInterval:
    """Interval with endpoints kept in a+sqrt(b) form for exact comparisons."""

    __slots__ = ("lo", "hi", "empty")

    def __init__(self, lo: Optional[Radical], hi: Optional[Radical]):
        if lo is None or hi is None:
            self.lo = None
            self.hi = None
            self.empty = True
        else:
            self.lo = lo
            self.hi = hi
            self.empty = not lo.le(hi)

    @staticmethod
    def make_empty() -> "RadInterval":
        return RadInterval(None, None)

    def clamp01(self) -> "RadInterval":
        if self.empty:
            return self
        lo = rad_max(self.lo, ZERO)
        hi = rad_min(self.hi, ONE)
        return RadInterval(lo, hi)

    def affine(self, scale: float, offset: float) -> "RadInterval":
        if self.empty:
            return self
        return RadInterval(self.lo.affine(scale, offset), self.hi.affine(scale, offset))

    def to_interval(self) -> Interval:
        if self.empty:
            return Interval.empty()
        return Interval(self.lo.value(), self.hi.value())

    def __repr__(self) -> str:  # pragma: no cover
        if self.empty:
            return "RadInterval(empty)"
        return f"RadInterval({self.lo.value():.6g}, {self.hi.value():.6g})"


# ---------------------------------------------------------------------------
# segments and curves


def as_point(p: Sequence[float]) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.ndim != 1:
        raise ValueError("a point must be a flat coordinate sequence")
    if not np.all(np.isfinite(a)):
        raise ValueError("point coordinates must be finite")
    return a


@dataclass(frozen=True)
class Segment:
    start: np.ndarray
    end: np.ndarray

    def __init__(self, start: Sequence[float], end: Sequence[float]):
        object.__setattr__(self, "start", as_point(start))
        object.__setattr__(self, "end", as_point(end))
        if self.start.shape != self.end.shape:
            raise ValueError("segment endpoints must share a dimension")

    def direction(self) -> np.ndarray:
        return self.end - self.start

    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    def at(self, t: float) -> np.ndarray:
        return (1.0 - t) * self.start + t * self.end

    def reversed(self) -> "Segment":
        return Segment(self.end, self.start)

    def subsegment(self, a: float, b: float) -> "Segment":
        return Segment(self.at(a), self.at(b))


@dataclass(frozen=True)
class EdgePoint:
    """A point on a curve given as (edge index, local parameter in [0,1])."""

    edge_index: int
    local: float

    def __post_init__(self):
        if not 0.0 <= self.local <= 1.0:
            raise ValueError("local parameter must lie in [0,1]")


class PolyCurve:
    """Polygonal curve with vertex parameters; evaluation interpolates linearly."""

    __slots__ = ("vertices", "vertex_params")

    def __init__(self, vertices, vertex_params=None):
        v = np.asarray(vertices, dtype=float)
        if v.ndim == 1:
            v = v.reshape(1, -1)
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError("need at least one vertex")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertex coordinates must be finite")
        n = v.shape[0]
        if vertex_params is None:
            params = np.linspace(0.0, 1.0, n) if n > 1 else np.zeros(1)
        else:
            params = np.asarray(vertex_params, dtype=float)
        if params.shape != (n,):
            raise ValueError("vertex_params must match the vertex count")
        if n > 1:
            if params[0] != 0.0 or params[-1] != 1.0:
                raise ValueError("vertex_params must start at 0 and end at 1")
            if np.any(np.diff(params) <= 0):
                raise ValueError("vertex_params must be strictly increasing")
        self.vertices = v
        self.vertex_params = params

    # -- basic accessors (1-based indices) --

    @property
    def n(self) -> int:
        return self.vertices.shape[0]

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def num_edges(self) -> int:
        return max(self.n - 1, 0)

    def vertex(self, i: int) -> np.ndarray:
        if not 1 <= i <= self.n:
            raise IndexError(f"vertex index {i} out of range 1..{self.n}")
        return self.vertices[i - 1]

    def param(self, i: int) -> float:
        if not 1 <= i <= self.n:
            raise IndexError(f"vertex index {i} out of range 1..{self.n}")
        return float(self.vertex_params[i - 1])

    def edge(self, i: int) -> Segment:
        if not 1 <= i <= self.num_edges:
            raise IndexError(f"edge index {i} out of range 1..{self.num_edges}")
        return Segment(self.vertices[i - 1], self.vertices[i])

    def edge_width(self, i: int) -> float:
        return float(self.vertex_params[i] - self.vertex_params[i - 1])

    def arclength(self) -> float:
        if self.n < 2:
            return 0.0
        return float(np.sum(np.linalg.norm(np.diff(self.vertices, axis=0), axis=1)))

    # -- parametrization --

    def eval(self, t: float) -> np.ndarray:
        if not 0.0 <= t <= 1.0:
            raise ValueError("parameter outside [0,1]")
        if self.n == 1:
            return self.vertices[0].copy()
        i = int(np.searchsorted(self.vertex_params, t, side="right")) - 1
        i = min(max(i, 0), self.n - 2)
        w = self.vertex_params[i + 1] - self.vertex_params[i]
        local = (t - self.vertex_params[i]) / w
        return (1.0 - local) * self.vertices[i] + local * self.vertices[i + 1]

    def edge_point_param(self, p: EdgePoint) -> float:
        """Global parameter of an edge point: (1-local)*t_i + local*t_{i+1}."""
        i = p.edge_index
        if not 1 <= i <= self.num_edges:
            raise IndexError(f"edge index {i} out of range 1..{self.num_edges}")
        return (1.0 - p.local) * self.param(i) + p.local * self.param(i + 1)

    def edge_point_coords(self, p: EdgePoint) -> np.ndarray:
        e = self.edge(p.edge_index)
        return e.at(p.local)

    def locate(self, t: float) -> EdgePoint:
        """Edge point for a global parameter; vertex params go to the left edge end."""
        if not 0.0 <= t <= 1.0:
            raise ValueError("parameter outside [0,1]")
        if self.n == 1:
            raise ValueError("a single-vertex curve has no edges")
        i = int(np.searchsorted(self.vertex_params, t, side="right")) - 1
        i = min(max(i, 0), self.n - 2)
        w = self.vertex_params[i + 1] - self.vertex_params[i]
        local = min(max((t - self.vertex_params[i]) / w, 0.0), 1.0)
        return EdgePoint(i + 1, local)

    def reversed(self) -> "PolyCurve":
        return PolyCurve(self.vertices[::-1].copy(), (1.0 - self.vertex_params)[::-1].copy())

    def subcurve(self, a: EdgePoint, b: EdgePoint) -> "PolyCurve":
        """Subcurve between two edge points, a before or equal to b."""
        ga, gb = self.edge_point_param(a), self.edge_point_param(b)
        if ga > gb:
            raise ValueError("start point must not come after end point")
        pa, pb = self.edge_point_coords(a), self.edge_point_coords(b)
        verts = [pa]
        for v in range(a.edge_index + 1, b.edge_index + 1):
            verts.append(self.vertices[v - 1])
        verts.append(pb)
        pts, keep = [], None
        for q in verts:
            if keep is None or not np.array_equal(keep, q):
                pts.append(q)
                keep = q
        if len(pts) == 1:
            return PolyCurve(np.array([pts[0], pts[0]]))
        return PolyCurve(np.array(pts))

    def __repr__(self) -> str:  # pragma: no cover
        return f"PolyCurve(n={self.n}, d={self.dim})"


def curve_from_points(points, params=None) -> PolyCurve:
    return PolyCurve(np.asarray(points, dtype=float), params)


def arclength_params(points: np.ndarray) -> np.ndarray:
    """Normalized arclength parameters; uniform fallback for zero total length."""
    n = points.shape[0]
    if n == 1:
        return np.zeros(1)
    seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
    total = float(seg.sum())
    if total <= 0.0:
        return np.linspace(0.0, 1.0, n)
    t = np.concatenate([[0.0], np.cumsum(seg)]) / total
    t[-1] = 1.0
    return t


# ---------------------------------------------------------------------------
# intersection kernel


def ball_segment_radical(p: np.ndarray, q: np.ndarray, r: np.ndarray, delta: float) -> RadInterval:
    """{t in [0,1] : |p + t(q-p) - r| <= delta} with radical endpoints."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    v = q - p
    w = p - r
    aa = float(np.dot(v, v))
    if aa == 0.0:
        inside = float(np.dot(w, w)) <= delta * delta
        return RadInterval(ZERO, ONE) if inside else RadInterval.make_empty()
    bb = 2.0 * float(np.dot(v, w))
    cc = float(np.dot(w, w)) - delta * delta
    disc = bb * bb - 4.0 * aa * cc
    if disc < 0.0:
        return RadInterval.make_empty()
    mid = -bb / (2.0 * aa)
    rad = disc / (4.0 * aa * aa)
    return RadInterval(Radical(mid, rad, -1), Radical(mid, rad, 1)).clamp01()


def ball_segment_intersection(p, q, r, delta: float) -> Interval:
    """Parameter interval of segment p->q inside the ball of radius delta at r."""
    return ball_segment_radical(as_point(p), as_point(q), as_point(r), float(delta)).to_interval()


_NEG_INF_RAD = Radical(-1e300, 0.0, 1)
_POS_INF_RAD = Radical(1e300, 0.0, 1)


def _quadratic_sublevel(aa: float, bb: float, cc: float) -> RadInterval:
    """{t : aa t^2 + bb t + cc <= 0} for aa >= 0 (constant and linear included)."""
    if aa == 0.0:
        if bb == 0.0:
            return RadInterval(_NEG_INF_RAD, _POS_INF_RAD) if cc <= 0 else RadInterval.make_empty()
        t0 = -cc / bb
        if bb > 0:
            return RadInterval(_NEG_INF_RAD, Radical.exact(t0))
        return RadInterval(Radical.exact(t0), _POS_INF_RAD)
    disc = bb * bb - 4.0 * aa * cc
    if disc < 0.0:
        return RadInterval.make_empty()
    mid = -bb / (2.0 * aa)
    rad = disc / (4.0 * aa * aa)
    return RadInterval(Radical(mid, rad, -1), Radical(mid, rad, 1))


def capsule_segment_radical(seg_ab: Segment, seg_pq: Segment, delta: float) -> RadInterval:
    """{t in [0,1] : dist(seg_pq(t), seg_ab) <= delta} with radical endpoints.

    The distance from a point moving along seg_pq to the fixed segment seg_ab
    is convex in t, so the sublevel set is one interval.  It is assembled from
    the three regimes of the point-to-segment distance (before the start,
    orthogonal band, past the end).
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    a, b = seg_ab.start, seg_ab.end
    w = b - a
    ww = float(np.dot(w, w))
    if ww == 0.0:
        return ball_segment_radical(seg_pq.start, seg_pq.end, a, delta)
    p, q = seg_pq.start, seg_pq.end
    v = q - p
    # projection parameter u(t) = (p + t v - a).w / ww is affine in t
    u0 = float(np.dot(p - a, w)) / ww
    u1 = float(np.dot(v, w)) / ww  # slope
    pieces = []

    def clip(lo: float, hi: float):
        lo, hi = max(lo, 0.0), min(hi, 1.0)
        return (lo, hi) if lo <= hi else None

    if u1 == 0.0:
        regs = [(0.0, 1.0, 0 if u0 < 0 else (2 if u0 > 1 else 1))]
    else:
        t_at0 = (0.0 - u0) / u1
        t_at1 = (1.0 - u0) / u1
        lo_t, hi_t = min(t_at0, t_at1), max(t_at0, t_at1)
        first = 0 if u1 > 0 else 2
        last = 2 - first
        regs = [(-math.inf, lo_t, first), (lo_t, hi_t, 1), (hi_t, math.inf, last)]
    dd = delta * delta
    for lo, hi, kind in regs:
        rng = clip(lo, hi)
        if rng is None:
            continue
        if kind == 0:  # distance to endpoint a
            iv = _quadratic_sublevel(
                float(np.dot(v, v)), 2.0 * float(np.dot(v, p - a)), float(np.dot(p - a, p - a)) - dd
            )
        elif kind == 2:  # distance to endpoint b
            iv = _quadratic_sublevel(
                float(np.dot(v, v)), 2.0 * float(np.dot(v, p - b)), float(np.dot(p - b, p - b)) - dd
            )
        else:  # orthogonal band: |z - a - u(t) w|^2 with u affine
            # perp(t) = (p - a + t v) - (u0 + u1 t) w  is affine in t
            c0 = (p - a) - u0 * w
            c1 = v - u1 * w
            iv = _quadratic_sublevel(
                float(np.dot(c1, c1)), 2.0 * float(np.dot(c0, c1)), float(np.dot(c0, c0)) - dd
            )
        if iv.empty:
            continue
        lo_r = rad_max(iv.lo, Radical.exact(rng[0]))
        hi_r = rad_min(iv.hi, Radical.exact(rng[1]))
        piece = RadInterval(lo_r, hi_r)
        if not piece.empty:
            pieces.append(piece)
    if not pieces:
        return RadInterval.make_empty()
    # convexity: pieces are contiguous, the hull is exact
    lo = rad_min(*[pc.lo for pc in pieces])
    hi = rad_max(*[pc.hi for pc in pieces])
    return RadInterval(lo, hi).clamp01()


def capsule_segment_intersection(seg_ab: Segment, seg_pq: Segment, delta: float) -> Interval:
    """Parameter interval of seg_pq within distance delta of segment seg_ab."""
    return capsule_segment_radical(seg_ab, seg_pq, float(delta)).to_interval()


def point_segment_dist_sq(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    w = b - a
    ww = float(np.dot(w, w))
    if ww == 0.0:
        d = p - a
        return float(np.dot(d, d))
    u = float(np.dot(p - a, w)) / ww
    u = min(max(u, 0.0), 1.0)
    d = p - (a + u * w)
    return float(np.dot(d, d))


def segment_segment_dist_sq(s1: Segment, s2: Segment) -> float:
    """Squared minimum distance between two segments (clamped closed form)."""
    p1, d1 = s1.start, s1.direction()
    p2, d2 = s2.start, s2.direction()
    r = p1 - p2
    a = float(np.dot(d1, d1))
    e = float(np.dot(d2, d2))
    f = float(np.dot(d2, r))
    if a == 0.0 and e == 0.0:
        return float(np.dot(r, r))
    if a == 0.0:
        return point_segment_dist_sq(p1, s2.start, s2.end)
    if e == 0.0:
        return point_segment_dist_sq(p2, s1.start, s1.end)
    c = float(np.dot(d1, r))
    bdot = float(np.dot(d1, d2))
    denom = a * e - bdot * bdot
    if denom > 0.0:
        s = min(max((bdot * f - c * e) / denom, 0.0), 1.0)
    else:
        s = 0.0
    t = (bdot * s + f) / e
    if t < 0.0:
        t = 0.0
        s = min(max(-c / a, 0.0), 1.0)
    elif t > 1.0:
        t = 1.0
        s = min(max((bdot - c) / a, 0.0), 1.0)
    diff = (p1 + s * d1) - (p2 + t * d2)
    return float(np.dot(diff, diff))
