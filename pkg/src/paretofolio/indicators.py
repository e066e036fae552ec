"""Bi-objective hypervolume, front normalization and multi-run aggregation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBounds, MismatchedLengths


@dataclass(frozen=True)
class HVConfig:
    """Reference point and normalization bounds for comparable HV numbers."""

    ref_point: tuple[float, float] = (1.1, 1.1)
    bounds: tuple[np.ndarray, np.ndarray] | None = None  # (ideal, nadir)


@dataclass(frozen=True)
class TraceSummary:
    mean_hv: np.ndarray
    std_hv: np.ndarray
    mean_wall_time: float


def hypervolume_2d(front: np.ndarray, ref) -> float:
    """Exact dominated area for a 2-D minimization front.

    Points with any coordinate >= the reference point are excluded, the rest
    reduced to their non-dominated subset, then summed as a staircase of
    rectangles.  Empty fronts score 0.
    """
    pts = np.atleast_2d(np.asarray(front, dtype=float))
    ref = np.asarray(ref, dtype=float)
    if pts.size == 0:
        return 0.0
    pts = pts[np.all(pts < ref, axis=1)]
    if pts.shape[0] == 0:
        return 0.0

    # sort by x ascending, y ascending; keep the staircase (strictly
    # decreasing y) which is exactly the non-dominated subset
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    stair = []
    best_y = np.inf
    for x, y in pts:
        if y < best_y:
            stair.append((x, y))
            best_y = y
    area = 0.0
    for i, (x, y) in enumerate(stair):
        next_x = stair[i + 1][0] if i + 1 < len(stair) else ref[0]
        area += (next_x - x) * (ref[1] - y)
    return float(area)


def front_bounds(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(ideal, nadir) of a point cloud; degenerate axes get a unit span."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    ideal = pts.min(axis=0)
    nadir = pts.max(axis=0)
    span = nadir - ideal
    nadir = np.where(span > 0, nadir, ideal + 1.0)
    return ideal, nadir


def normalize_front(
    points: np.ndarray, bounds: tuple[np.ndarray, np.ndarray]
) -> tuple[np.ndarray, np.ndarray]:
    """Affine map to [0, 1] per axis; returns (normalized, clipped_mask)."""
    ideal, nadir = (np.asarray(b, dtype=float) for b in bounds)
    if np.any(nadir <= ideal):
        raise DegenerateBounds(f"nadir {nadir} must exceed ideal {ideal} per axis")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    norm = (pts - ideal) / (nadir - ideal)
    clipped = np.any((norm < 0.0) | (norm > 1.0), axis=1)
    return np.clip(norm, 0.0, 1.0), clipped


def aggregate_traces(runs) -> TraceSummary:
    """Per-generation mean and sample std of hv_trace over runs, plus mean wall time."""
    if not runs:
        raise MismatchedLengths("no runs to aggregate")
    lengths = {len(r.hv_trace) for r in runs}
    if len(lengths) != 1:
        raise MismatchedLengths(f"hv traces of differing lengths: {sorted(lengths)}")
    traces = np.array([r.hv_trace for r in runs])
    std = traces.std(axis=0, ddof=1) if len(runs) > 1 else np.zeros(traces.shape[1])
    times = float(np.mean([r.wall_time_seconds for r in runs]))
    return TraceSummary(traces.mean(axis=0), std, times)
