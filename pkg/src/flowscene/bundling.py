"""Skeleton-driven bundling of origin-destination flows.

Pipeline: classify flows by length -> directional clustering -> volume-weighted
density field (Gaussian splatting) -> exact two-pass Euclidean distance
transform over the high-density mask -> ridge (local-maximum) skeleton ->
iterative attraction of interior control points toward admissible skeleton
points, interleaved with cluster cohesion. All geometry here lives in grid
coordinates; only the long/short/bypass classification uses kilometers.

A skeleton point is admissible for a control point when
  (a) routing through it keeps the relative detour below the class threshold,
  (b) it lies generally ahead of the moving point (unit dot > forward_dot_min),
  (c) it projects onto the source-target segment within the allowed range.
Flows below the bypass length skip attraction entirely; listed anomalous flows
are drawn as fixed curved arcs instead.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .clustering import build_clusters, cluster_id_array, cohesion_step
from .config import BundleParams
from .errors import InputError, PipelineError
from .geo import GridMapping
from .ingest import FlowEdge
from . import kernels
from .kernels import CLASS_NAMES, CLS_BYPASS, CLS_EXCLUDED, CLS_LONG, CLS_SHORT


@dataclass
class ControlPolyline:
    """A flow's k-subdivided geometry; endpoints stay pinned to the projected
    origin/destination through every stage."""

    flow_index: int
    flow_class: str
    points: np.ndarray  # (k+1, 2) grid coordinates


@dataclass
class DensityField:
    grid: np.ndarray  # (resolution, resolution), indexed [y, x]
    mapping: GridMapping
    sigma: float
    samples_per_edge: int


@dataclass
class DistanceField:
    dist: np.ndarray      # float distance in cells; 0 outside the mask
    dist_sq: np.ndarray   # exact integer squared distances
    mask: np.ndarray      # high-density cells


@dataclass(frozen=True)
class SkeletonPoint:
    x: float              # grid coords of the cell center
    y: float
    importance: float     # distance value normalized by the field maximum


@dataclass
class PipelineReport:
    class_counts: dict[str, int]
    skeleton_point_count: int
    mean_displacement_per_iteration: list[float]
    wall_time_ms: float | None
    mapping: GridMapping
    # per-iteration (E, k+1) arrays of accepted skeleton indices, -1 = none;
    # kept for constraint auditing, not serialized
    accepted_indices: list[np.ndarray] = field(default_factory=list)

    def to_dict(self, include_wall_time: bool = True) -> dict:
        return {
            "class_counts": dict(self.class_counts),
            "skeleton_point_count": self.skeleton_point_count,
            "mean_displacement_per_iteration": list(self.mean_displacement_per_iteration),
            "wall_time_ms": self.wall_time_ms if include_wall_time else None,
            "grid": {
                "bounds": [
                    self.mapping.min_lon, self.mapping.min_lat,
                    self.mapping.max_lon, self.mapping.max_lat,
                ],
                "resolution": self.mapping.resolution,
            },
        }


def bell_weight(i: int, k: int) -> float:
    """Quadratic bell curve 4 (i/k)(1 - i/k): zero at both endpoints, one at k/2.

    This is the per-index displacement weight used during attraction; it is
    what keeps the origin/destination anchors fixed.
    """
    return 4.0 * (i / k) * (1.0 - i / k)


def classify_flow(flow: FlowEdge, params: BundleParams) -> int:
    if (flow.origin_warehouse, flow.dest_region) in params.exclusion_set:
        return CLS_EXCLUDED
    if flow.length_km < params.bypass_km:
        return CLS_BYPASS
    if flow.length_km > params.long_km:
        return CLS_LONG
    return CLS_SHORT


def flow_mapping(flows: Sequence[FlowEdge], params: BundleParams) -> GridMapping:
    pts = []
    for f in flows:
        pts.append(f.origin_location)
        pts.append(f.dest_centroid)
    return GridMapping.from_points(pts, resolution=params.grid_resolution,
                                   margin_frac=params.margin_frac)


def initial_polylines(flows: Sequence[FlowEdge], mapping: GridMapping,
                      params: BundleParams) -> np.ndarray:
    """Straight k-subdivided polylines in grid space, shape (E, k+1, 2)."""
    k = params.subdivisions
    e = len(flows)
    out = np.empty((e, k + 1, 2), dtype=np.float64)
    ts = np.linspace(0.0, 1.0, k + 1)
    for i, f in enumerate(flows):
        x0, y0 = mapping.project(f.origin_location)
        x1, y1 = mapping.project(f.dest_centroid)
        out[i, :, 0] = x0 + (x1 - x0) * ts
        out[i, :, 1] = y0 + (y1 - y0) * ts
        # endpoints must be bit-exact projections, not interpolation results
        out[i, 0] = (x0, y0)
        out[i, k] = (x1, y1)
    return out


def build_density_field(flows: Sequence[FlowEdge], mapping: GridMapping,
                        params: BundleParams) -> DensityField:
    """Volume-weighted Gaussian splat of uniformly sampled straight edges."""
    if not flows:
        raise PipelineError("no edges: cannot build a density field")
    n = params.density_samples
    ts = np.linspace(0.0, 1.0, n)
    xs = np.empty(len(flows) * n, dtype=np.float64)
    ys = np.empty_like(xs)
    ws = np.empty_like(xs)
    for i, f in enumerate(flows):
        x0, y0 = mapping.project(f.origin_location)
        x1, y1 = mapping.project(f.dest_centroid)
        sl = slice(i * n, (i + 1) * n)
        xs[sl] = x0 + (x1 - x0) * ts
        ys[sl] = y0 + (y1 - y0) * ts
        ws[sl] = float(f.order_count)
    grid = np.zeros((mapping.resolution, mapping.resolution), dtype=np.float64)
    kernels.splat_gaussian(grid, xs, ys, ws, params.sigma,
                           params.truncate_sigmas * params.sigma)
    return DensityField(grid=grid, mapping=mapping, sigma=params.sigma,
                        samples_per_edge=n)


def compute_edt(density: DensityField, threshold_frac: float) -> DistanceField:
    """Exact Euclidean distance from each high-density cell to the nearest cell
    outside the mask; cells outside the mask carry 0."""
    peak = float(density.grid.max())
    if not peak > 0.0:
        raise PipelineError("density field is empty (max = 0)")
    mask = density.grid > threshold_frac * peak
    if not mask.any():
        raise PipelineError("threshold too high: high-density mask is empty")
    if mask.all():
        raise PipelineError("threshold too low: mask covers the entire grid")
    sq = kernels.edt_squared(~mask)
    dist = np.sqrt(sq.astype(np.float64))
    return DistanceField(dist=dist, dist_sq=sq, mask=mask)


def extract_skeleton(dist_field: DistanceField) -> list[SkeletonPoint]:
    """Ridge cells: masked local maxima (8-neighborhood) of the distance field,
    ordered y-major; importance is normalized by the field maximum."""
    d = dist_field.dist
    rows, cols = d.shape
    padded = np.full((rows + 2, cols + 2), -1.0)
    padded[1:-1, 1:-1] = d
    is_max = np.ones((rows, cols), dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            neighbor = padded[1 + dy:rows + 1 + dy, 1 + dx:cols + 1 + dx]
            is_max &= d >= neighbor
    is_max &= dist_field.mask & (d > 0.0)
    ys, xs = np.nonzero(is_max)  # row-major scan = y-major ordering
    if ys.size == 0:
        raise PipelineError("degenerate skeleton: no local maxima in the distance field")
    peak = float(d[ys, xs].max())
    return [
        SkeletonPoint(x=float(x) + 0.5, y=float(y) + 0.5, importance=float(d[y, x]) / peak)
        for y, x in zip(ys, xs)
    ]


def detour_ratio(s: tuple[float, float], t: tuple[float, float],
                 skel: tuple[float, float]) -> float:
    """Relative path elongation of routing s -> skel -> t versus s -> t."""
    direct = math.dist(s, t)
    if direct <= 0.0:
        raise InputError("degenerate edge: coincident endpoints")
    return (math.dist(s, skel) + math.dist(skel, t) - direct) / direct


def passes_checks(edge: ControlPolyline, i: int, skel: SkeletonPoint,
                  params: BundleParams) -> bool:
    """Admissibility of one (control point, skeleton point) pairing."""
    if edge.flow_class in ("bypass", "excluded"):
        return False
    k = edge.points.shape[0] - 1
    if not 0 < i < k:
        raise InputError(f"control index {i} is not interior (0 < i < {k})")
    s = (edge.points[0, 0], edge.points[0, 1])
    t = (edge.points[k, 0], edge.points[k, 1])
    tau = params.tau_long if edge.flow_class == "long" else params.tau_short
    if not detour_ratio(s, t, (skel.x, skel.y)) < tau:
        return False
    seg = (t[0] - s[0], t[1] - s[1])
    seg_len2 = seg[0] * seg[0] + seg[1] * seg[1]
    proj = ((skel.x - s[0]) * seg[0] + (skel.y - s[1]) * seg[1]) / seg_len2
    if not params.projection_min <= proj <= params.projection_max:
        return False
    p = edge.points[i]
    off = (skel.x - p[0], skel.y - p[1])
    off_len = math.hypot(off[0], off[1])
    if off_len == 0.0:
        return True  # coincident: zero displacement, trivially admissible
    seg_len = math.sqrt(seg_len2)
    dot = (off[0] * seg[0] + off[1] * seg[1]) / (off_len * seg_len)
    return dot > params.forward_dot_min


def _skeleton_arrays(skeleton: Sequence[SkeletonPoint]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    skx = np.array([p.x for p in skeleton], dtype=np.float64)
    sky = np.array([p.y for p in skeleton], dtype=np.float64)
    skw = np.array([p.importance for p in skeleton], dtype=np.float64)
    return skx, sky, skw


def _candidate_csr(points: np.ndarray, classes: np.ndarray,
                   skx: np.ndarray, sky: np.ndarray,
                   params: BundleParams) -> tuple[np.ndarray, np.ndarray]:
    """Per-edge skeleton candidates passing the detour and projection checks.

    Those two checks depend only on the fixed endpoints, so they are evaluated
    once before the iterations; the forward-direction check stays per-point.
    """
    n_edges = points.shape[0]
    k = points.shape[1] - 1
    indptr = np.zeros(n_edges + 1, dtype=np.int64)
    chunks: list[np.ndarray] = []
    for e in range(n_edges):
        if classes[e] != CLS_LONG and classes[e] != CLS_SHORT:
            indptr[e + 1] = indptr[e]
            continue
        sx, sy = points[e, 0]
        tx, ty = points[e, k]
        segx, segy = tx - sx, ty - sy
        seg_len2 = segx * segx + segy * segy
        if seg_len2 <= 0.0:
            indptr[e + 1] = indptr[e]
            continue
        direct = math.sqrt(seg_len2)
        d_s = np.sqrt((skx - sx) ** 2 + (sky - sy) ** 2)
        d_t = np.sqrt((skx - tx) ** 2 + (sky - ty) ** 2)
        ratio = (d_s + d_t - direct) / direct
        tau = params.tau_long if classes[e] == CLS_LONG else params.tau_short
        proj = ((skx - sx) * segx + (sky - sy) * segy) / seg_len2
        ok = (ratio < tau) & (proj >= params.projection_min) & (proj <= params.projection_max)
        idx = np.nonzero(ok)[0].astype(np.int64)
        chunks.append(idx)
        indptr[e + 1] = indptr[e] + idx.size
    vidx = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    return indptr, vidx


def attract_iteration(
    polylines: list[ControlPolyline],
    skeleton: Sequence[SkeletonPoint],
    params: BundleParams,
    iteration: int = 1,
) -> list[ControlPolyline]:
    """One synchronous attraction step over a list of polylines.

    Bundling uses the array path internally; this wrapper exists for direct
    use and testing of a single step.
    """
    if not skeleton:
        raise PipelineError("skeleton is empty")
    points = np.stack([p.points for p in polylines]).astype(np.float64)
    name_to_code = {v: k for k, v in CLASS_NAMES.items()}
    classes = np.array([name_to_code[p.flow_class] for p in polylines], dtype=np.int8)
    skx, sky, skw = _skeleton_arrays(skeleton)
    indptr, vidx = _candidate_csr(points, classes, skx, sky, params)
    new_pts, _ = kernels.attract_pass(
        points, classes, indptr, vidx, skx, sky, skw,
        params.alpha, params.long_bonus, params.short_factor, params.forward_dot_min,
    )
    return [
        ControlPolyline(p.flow_index, p.flow_class, new_pts[i])
        for i, p in enumerate(polylines)
    ]


def render_excluded_arc(flow: FlowEdge, mapping: GridMapping,
                        params: BundleParams) -> ControlPolyline:
    """Fixed curved arc for an anomalous flow: quadratic Bezier whose control
    point sits over the chord midpoint, offset left of travel by 15% of the
    chord length."""
    k = params.subdivisions
    x0, y0 = mapping.project(flow.origin_location)
    x1, y1 = mapping.project(flow.dest_centroid)
    chord = math.hypot(x1 - x0, y1 - y0)
    if chord <= 0.0:
        raise InputError("degenerate edge: zero-length chord")
    ux, uy = (x1 - x0) / chord, (y1 - y0) / chord
    nx, ny = -uy, ux  # left of travel (grid y grows northward)
    cx = (x0 + x1) / 2.0 + 0.15 * chord * nx
    cy = (y0 + y1) / 2.0 + 0.15 * chord * ny
    u = np.linspace(0.0, 1.0, k + 1)
    bx = (1 - u) ** 2 * x0 + 2 * u * (1 - u) * cx + u ** 2 * x1
    by = (1 - u) ** 2 * y0 + 2 * u * (1 - u) * cy + u ** 2 * y1
    pts = np.stack([bx, by], axis=1)
    pts[0] = (x0, y0)
    pts[k] = (x1, y1)
    return ControlPolyline(flow_index=-1, flow_class="excluded", points=pts)


def bundle(flows: Sequence[FlowEdge], params: BundleParams,
           mapping: GridMapping | None = None) -> tuple[list[ControlPolyline], PipelineReport]:
    """Run the full bundling pipeline; geometry is returned pre-smoothing.

    Pure function of (flows, params): identical inputs give bit-identical
    output. Excluded flows keep their fixed arcs and never move; bypass flows
    receive neighbor averaging only.
    """
    if not flows:
        raise PipelineError("no edges: empty flow list")
    params.validate()
    t_start = time.perf_counter()

    if mapping is None:
        mapping = flow_mapping(flows, params)
    classes = np.array([classify_flow(f, params) for f in flows], dtype=np.int8)
    class_counts = {name: int((classes == code).sum()) for code, name in CLASS_NAMES.items()}

    points = initial_polylines(flows, mapping, params)
    clusters = build_clusters(list(flows))
    cluster_ids = cluster_id_array(clusters, len(flows))

    density = build_density_field(flows, mapping, params)
    dist_field = compute_edt(density, params.density_threshold_frac)
    skeleton = extract_skeleton(dist_field)
    skx, sky, skw = _skeleton_arrays(skeleton)
    indptr, vidx = _candidate_csr(points, classes, skx, sky, params)

    interior = slice(1, points.shape[1] - 1)
    moving = (classes == CLS_LONG) | (classes == CLS_SHORT) | (classes == CLS_BYPASS)
    mean_disp: list[float] = []
    accepted: list[np.ndarray] = []
    total = params.iterations
    for t in range(1, total + 1):
        before = points
        points, chosen = kernels.attract_pass(
            points, classes, indptr, vidx, skx, sky, skw,
            params.alpha, params.long_bonus, params.short_factor,
            params.forward_dot_min,
        )
        points = cohesion_step(points, classes, cluster_ids, t, total, params)
        delta = points[moving, interior] - before[moving, interior]
        if delta.size:
            mean_disp.append(float(np.sqrt((delta ** 2).sum(axis=-1)).mean()))
        else:
            mean_disp.append(0.0)
        accepted.append(chosen)

    polylines: list[ControlPolyline] = []
    for i, f in enumerate(flows):
        cls_name = CLASS_NAMES[int(classes[i])]
        if classes[i] == CLS_EXCLUDED:
            poly = render_excluded_arc(f, mapping, params)
            poly.flow_index = i
            polylines.append(poly)
        else:
            polylines.append(ControlPolyline(i, cls_name, points[i]))

    report = PipelineReport(
        class_counts=class_counts,
        skeleton_point_count=len(skeleton),
        mean_displacement_per_iteration=mean_disp,
        wall_time_ms=(time.perf_counter() - t_start) * 1000.0,
        mapping=mapping,
        accepted_indices=accepted,
    )
    return polylines, report


def verify_detour_bounds(
    flows: Sequence[FlowEdge],
    params: BundleParams,
    report: PipelineReport,
    skeleton: Sequence[SkeletonPoint],
    mapping: GridMapping,
) -> int:
    """Audit every accepted attraction against the detour bound; returns the
    number of violations (0 on a sound run)."""
    violations = 0
    for f_idx, f in enumerate(flows):
        cls = classify_flow(f, params)
        if cls not in (CLS_LONG, CLS_SHORT):
            continue
        tau = params.tau_long if cls == CLS_LONG else params.tau_short
        s = mapping.project(f.origin_location)
        t = mapping.project(f.dest_centroid)
        for chosen in report.accepted_indices:
            row = chosen[f_idx]
            for j in row[row >= 0]:
                p = skeleton[int(j)]
                if not detour_ratio(s, t, (p.x, p.y)) < tau:
                    violations += 1
    return violations
