"""Command-line driver: ingest a trajectory, run a cover search, report.

Input format: one point per line, d numeric columns separated by whitespace
or commas; lines starting with '#' are skipped.  Consecutive duplicate
points collapse to one.  Vertex parameters follow normalized arclength.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .candidates import candidate_set
from .geometry import Interval, PolyCurve, Segment, arclength_params
from .implicit import implicit_approx_cover
from .oracle import covers_unit, full_coverage
from .simplify import simplify_curve
from .solver import SolverConfig, SolverFailure, approx_cover, greedy_max_coverage


class ParseError(ValueError):
    pass


def ingest(path: str) -> PolyCurve:
    """Read a polygonal curve from a delimited text file."""
    rows: List[List[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            try:
                vals = [float(x) for x in parts]
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-numeric field in {line!r}")
            if rows and len(vals) != len(rows[0]):
                raise ParseError(
                    f"{path}:{lineno}: expected {len(rows[0])} columns, got {len(vals)}"
                )
            rows.append(vals)
    if not rows:
        raise ParseError(f"{path}: no points found")
    pts = np.asarray(rows, dtype=float)
    keep = [0]
    for i in range(1, len(pts)):
        if not np.array_equal(pts[i], pts[keep[-1]]):
            keep.append(i)
    pts = pts[keep]
    return PolyCurve(pts, arclength_params(pts))


def write_curve(P: PolyCurve, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in P.vertices:
            fh.write(" ".join(f"{x:.17g}" for x in v) + "\n")


@dataclass
class RunConfig:
    input_path: str
    delta: float
    variant: str = "explicit"
    seed: int = 0
    gamma_override: Optional[int] = None
    output_json_path: Optional[str] = None
    output_svg_path: Optional[str] = None
    verify: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.variant not in ("explicit", "implicit", "greedy"):
            raise ValueError("variant must be explicit, implicit or greedy")


def run(config: RunConfig) -> dict:
    """End-to-end pipeline; returns the report dictionary."""
    started = time.perf_counter()
    P = ingest(config.input_path)
    simp = simplify_curve(P, config.delta)
    S = simp.curve if simp.curve.n >= 2 else PolyCurve(
        np.vstack([simp.curve.vertices, simp.curve.vertices]), np.array([0.0, 1.0])
    )
    cfg = SolverConfig(
        gamma=config.gamma_override,
        rng_seed=config.seed,
        variant=config.variant,
        workers=config.workers,
    )
    failure = None
    if config.variant == "implicit":
        guarantee = 12.0 * config.delta
        try:
            result = implicit_approx_cover(P, config.delta, cfg)
        except SolverFailure as exc:
            failure, result = exc, None
    elif config.variant == "greedy":
        guarantee = 11.0 * config.delta
        B = candidate_set(S, config.delta)
        result = greedy_max_coverage(S, B, 8.0 * config.delta, max(len(B), 1))
    else:
        guarantee = 11.0 * config.delta
        try:
            result = approx_cover(P, config.delta, cfg, simplification=simp)
        except SolverFailure as exc:
            failure, result = exc, None

    report = {
        "schema": 1,
        "input": config.input_path,
        "delta": config.delta,
        "variant": config.variant,
        "seed": config.seed,
        "guarantee_radius": guarantee,
        "n_vertices": P.n,
        "n_simplified": S.n,
    }
    if failure is not None or result is None:
        report["verdict"] = "FAILED"
        report["failure"] = str(failure) if failure else "no cover found"
        report["wall_time_s"] = time.perf_counter() - started
        return report

    centers = result.center_segments(S)
    coverage = full_coverage(P, centers, guarantee)
    verdict = "SKIPPED"
    if config.verify:
        verdict = "PASS" if covers_unit(coverage) else "FAILED"
    report.update(
        {
            "k_found": result.k_found,
            "iterations": result.iterations,
            "centers": [[seg.start.tolist(), seg.end.tolist()] for seg in centers],
            "coverage": [[iv.lo, iv.hi] for iv in coverage],
            "verdict": verdict,
        }
    )
    report["wall_time_s"] = time.perf_counter() - started

    if config.output_json_path:
        with open(config.output_json_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if config.output_svg_path:
        render_svg(P, centers, coverage, config.output_svg_path)
    return report


def render_svg(P: PolyCurve, centers: Sequence[Segment], coverage: Sequence[Interval], path: str):
    """Deterministic SVG: input polyline, covered portions, center segments."""
    if P.dim != 2:
        raise ValueError("SVG rendering requires 2-dimensional curves")
    pts = P.vertices
    all_pts = [pts] + [np.vstack([s.start, s.end]) for s in centers]
    stack = np.vstack(all_pts)
    lo = stack.min(axis=0)
    hi = stack.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    margin = 0.05 * span
    lo, hi = lo - margin, hi + margin
    w, h = hi - lo

    def fmt(x):
        return f"{x:.6f}"

    def poly_points(arr):
        return " ".join(f"{fmt(x)},{fmt(y)}" for x, y in arr)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{fmt(lo[0])} {fmt(lo[1])} '
        f'{fmt(w)} {fmt(h)}">',
        f'<g transform="translate(0,{fmt(lo[1] + hi[1])}) scale(1,-1)">',
        f'<polyline fill="none" stroke="#888888" stroke-width="{fmt(0.004 * max(w, h))}" '
        f'points="{poly_points(pts)}"/>',
    ]
    for iv in coverage:
        if iv.is_empty():
            continue
        samples = np.linspace(iv.lo, iv.hi, max(2, 2 + 4 * P.num_edges))
        arc = np.array([P.eval(t) for t in samples])
        lines.append(
            f'<polyline fill="none" stroke="#2ca02c" stroke-opacity="0.6" '
            f'stroke-width="{fmt(0.008 * max(w, h))}" points="{poly_points(arc)}"/>'
        )
    for seg in centers:
        lines.append(
            f'<line x1="{fmt(seg.start[0])}" y1="{fmt(seg.start[1])}" '
            f'x2="{fmt(seg.end[0])}" y2="{fmt(seg.end[1])}" stroke="#d62728" '
            f'stroke-width="{fmt(0.006 * max(w, h))}"/>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(
        prog="subcover",
        description="Cover a polygonal trajectory with few segment patterns "
        "under the Frechet distance.",
    )
    ap.add_argument("--input", required=True, help="trajectory file, one point per line")
    ap.add_argument("--delta", required=True, type=float, help="target radius")
    ap.add_argument(
        "--variant", choices=("explicit", "implicit", "greedy"), default="explicit"
    )
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--gamma", type=int, default=None, help="sample-size constant override")
    ap.add_argument("--out", default=None, help="write the JSON report here")
    ap.add_argument("--svg", default=None, help="write an SVG rendering here (2D only)")
    ap.add_argument("--verify", action="store_true", help="check the cover on the input curve")
    args = ap.parse_args(argv)

    workers = max(int(os.environ.get("SUBCOVER_THREADS", "1")), 1)
    config = RunConfig(
        input_path=args.input,
        delta=args.delta,
        variant=args.variant,
        seed=args.seed,
        gamma_override=args.gamma,
        output_json_path=args.out,
        output_svg_path=args.svg,
        verify=args.verify,
        workers=workers,
    )
    try:
        report = run(config)
    except (ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(report, indent=2, sort_keys=True))
    if report["verdict"] == "FAILED":
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
