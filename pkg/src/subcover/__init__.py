"""subcover: segment covers of polygonal trajectories under the Frechet distance."""

from .geometry import (
    EdgePoint,
    Interval,
    PolyCurve,
    Segment,
    arclength_params,
    ball_segment_intersection,
    capsule_segment_intersection,
    curve_from_points,
)
from .radicals import GT, LE, Radical, cmp_radical, cmp_radical_const

__all__ = [
    "EdgePoint",
    "Interval",
    "PolyCurve",
    "Segment",
    "arclength_params",
    "ball_segment_intersection",
    "capsule_segment_intersection",
    "curve_from_points",
    "Radical",
    "cmp_radical",
    "cmp_radical_const",
    "LE",
    "GT",
]
