"""Multi-stage polyline smoothing: neighbor averaging interleaved with
centripetal spline interpolation, finished by uniform arc-length resampling.

Every pass keeps the first and last points bit-identical to its input's.
"""

from __future__ import annotations

import numpy as np

from .config import SmoothingSchedule
from .errors import InputError
from . import kernels


def gaussian_pass(points: np.ndarray, iterations: int, weight: float) -> np.ndarray:
    """Interior points repeatedly relax toward their neighbor midpoints:
    p_i <- (1-w) p_i + w (p_{i-1} + p_{i+1}) / 2, synchronously. Fewer than 3
    points: identity."""
    if not 0.0 < weight < 1.0:
        raise InputError(f"gaussian weight {weight} must lie in (0, 1)")
    pts = np.ascontiguousarray(points, dtype=np.float64)
    return kernels.gaussian_smooth(pts, int(iterations), float(weight))


def catmull_rom_pass(points: np.ndarray, density: int) -> np.ndarray:
    """Centripetal spline through every input point; each of the n-1 segments
    becomes `density` samples, so output length is (n-1) * density + 1."""
    if density < 2:
        raise InputError(f"spline density {density} must be >= 2")
    pts = np.ascontiguousarray(points, dtype=np.float64)
    return kernels.catmull_rom_resample(pts, int(density))


def resample_uniform(points: np.ndarray, count: int = 100) -> np.ndarray:
    """`count` points equally spaced in arc length; endpoints preserved exactly."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.shape[0] < 2:
        raise InputError("resampling needs at least 2 points")
    if count < 2:
        raise InputError(f"resample count {count} must be >= 2")
    try:
        return kernels.resample_uniform(pts, int(count))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def smooth_pipeline(points: np.ndarray, schedule: SmoothingSchedule | None = None) -> np.ndarray:
    """G, CR, G, CR, G, CR, G, then uniform resampling to the final count."""
    if schedule is None:
        schedule = SmoothingSchedule()
    schedule.validate()
    pts = np.ascontiguousarray(points, dtype=np.float64)
    g_passes = list(schedule.gaussian_passes)
    cr_passes = list(schedule.spline_densities)
    pts = gaussian_pass(pts, *g_passes[0])
    for (g_iter, g_weight), density in zip(g_passes[1:], cr_passes):
        pts = catmull_rom_pass(pts, density)
        pts = gaussian_pass(pts, g_iter, g_weight)
    return resample_uniform(pts, schedule.final_point_count)
