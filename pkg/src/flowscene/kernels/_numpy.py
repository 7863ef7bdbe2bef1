"""Pure-numpy implementations of the hot kernels.

Reference lane: every function here has a numba twin in ``_numba`` with the
same signature and the same arithmetic, so the two backends can be swapped via
the FLOWSCENE_BACKEND environment variable and cross-checked in tests.
"""

from __future__ import annotations

import math

import numpy as np

from ._codes import CLS_BYPASS, CLS_EXCLUDED, CLS_LONG, CLS_SHORT


def splat_gaussian(acc, xs, ys, ws, sigma, radius):
    """Accumulate w * exp(-d^2 / 2 sigma^2) around each sample point.

    `acc` is indexed [y, x]; cell (ix, iy) is evaluated at its center
    (ix + 0.5, iy + 0.5). Contributions beyond `radius` grid cells are dropped.
    """
    rows, cols = acc.shape
    inv = 1.0 / (2.0 * sigma * sigma)
    r2max = radius * radius
    for m in range(xs.shape[0]):
        x, y, w = xs[m], ys[m], ws[m]
        x0 = max(int(math.floor(x - radius - 0.5)), 0)
        x1 = min(int(math.ceil(x + radius - 0.5)), cols - 1)
        y0 = max(int(math.floor(y - radius - 0.5)), 0)
        y1 = min(int(math.ceil(y + radius - 0.5)), rows - 1)
        if x1 < x0 or y1 < y0:
            continue
        cx = np.arange(x0, x1 + 1, dtype=np.float64) + 0.5
        cy = np.arange(y0, y1 + 1, dtype=np.float64) + 0.5
        d2 = (cx[None, :] - x) ** 2 + (cy[:, None] - y) ** 2
        acc[y0:y1 + 1, x0:x1 + 1] += np.where(d2 <= r2max, np.exp(-d2 * inv) * w, 0.0)
    return acc


def edt_squared(site):
    """Exact squared Euclidean distance from every cell to the nearest True cell.

    Separable two-pass scheme: a vertical sweep produces per-column 1D
    distances, then the horizontal pass minimizes f(x') + (x - x')^2 over all
    columns. Exact integer arithmetic throughout.
    """
    rows, cols = site.shape
    big = rows + cols + 1
    d = np.full((rows, cols), big, dtype=np.int64)
    d[site] = 0
    for y in range(1, rows):
        np.minimum(d[y], d[y - 1] + 1, out=d[y])
    for y in range(rows - 2, -1, -1):
        np.minimum(d[y], d[y + 1] + 1, out=d[y])
    f = d * d
    offs = (np.arange(cols, dtype=np.int64)[:, None] - np.arange(cols, dtype=np.int64)[None, :]) ** 2
    return (f[:, None, :] + offs[None, :, :]).min(axis=2)


def attract_pass(pts, cls, indptr, vidx, skx, sky, skw,
                 alpha, long_bonus, short_factor, dot_min):
    """One synchronous attraction step toward the nearest admissible skeleton point.

    Detour and projection screening is already folded into the per-edge CSR
    candidate lists (indptr/vidx); only the forward-direction check depends on
    the moving point and is evaluated here. Returns (new_points, chosen) where
    chosen[e, i] is the accepted skeleton index or -1.
    """
    n_edges, n_pts, _ = pts.shape
    k = n_pts - 1
    new = pts.copy()
    chosen = np.full((n_edges, n_pts), -1, dtype=np.int32)
    ii = np.arange(1, k, dtype=np.float64)
    phi = 4.0 * (ii / k) * (1.0 - ii / k)
    for e in range(n_edges):
        c = cls[e]
        if c != CLS_LONG and c != CLS_SHORT:
            continue
        lo, hi = indptr[e], indptr[e + 1]
        if hi <= lo:
            continue
        idx = vidx[lo:hi]
        sx = skx[idx]
        sy = sky[idx]
        ux = pts[e, k, 0] - pts[e, 0, 0]
        uy = pts[e, k, 1] - pts[e, 0, 1]
        seg_len = math.sqrt(ux * ux + uy * uy)
        if seg_len <= 0.0:
            continue
        ux /= seg_len
        uy /= seg_len
        px = pts[e, 1:k, 0]
        py = pts[e, 1:k, 1]
        dx = sx[None, :] - px[:, None]
        dy = sy[None, :] - py[:, None]
        d2 = dx * dx + dy * dy
        dn = np.sqrt(d2)
        with np.errstate(invalid="ignore", divide="ignore"):
            dots = (dx * ux + dy * uy) / dn
        ok = (dn == 0.0) | (dots > dot_min)
        d2m = np.where(ok, d2, np.inf)
        best = np.argmin(d2m, axis=1)
        rowi = np.arange(px.shape[0])
        has = np.isfinite(d2m[rowi, best])
        bidx = idx[best]
        beta = long_bonus if c == CLS_LONG else short_factor
        f = ((alpha * beta) * phi) * skw[bidx]
        mvx = px + f * (skx[bidx] - px)
        mvy = py + f * (sky[bidx] - py)
        new[e, 1:k, 0] = np.where(has, mvx, px)
        new[e, 1:k, 1] = np.where(has, mvy, py)
        chosen[e, 1:k] = np.where(has, bidx.astype(np.int32), np.int32(-1))
    return new, chosen


def cohesion_pass(pts, cls, cluster_id, n_clusters, c_long, w_short):
    """One synchronous cohesion step.

    Long flows pull interior points toward their cluster's mean polyline by
    factor c_long; short and bypass flows apply light neighbor averaging with
    weight w_short; excluded flows are untouched. Endpoints never move.
    """
    n_edges, n_pts, _ = pts.shape
    new = pts.copy()
    sums = np.zeros((n_clusters, n_pts, 2), dtype=np.float64)
    counts = np.zeros(n_clusters, dtype=np.float64)
    np.add.at(sums, cluster_id, pts)
    np.add.at(counts, cluster_id, 1.0)
    centroids = sums / counts[:, None, None]

    longs = cls == CLS_LONG
    if np.any(longs):
        cen = centroids[cluster_id[longs], 1:-1]
        cur = pts[longs, 1:-1]
        new[longs, 1:-1] = cur + c_long * (cen - cur)
    short = (cls == CLS_SHORT) | (cls == CLS_BYPASS)
    if np.any(short):
        cur = pts[short]
        avg = 0.5 * (cur[:, :-2] + cur[:, 2:])
        new[short, 1:-1] = cur[:, 1:-1] + w_short * (avg - cur[:, 1:-1])
    return new


def gaussian_smooth(pts, iterations, weight):
    """Repeated neighbor averaging of interior points; endpoints fixed."""
    if pts.shape[0] < 3 or iterations <= 0:
        return pts.copy()
    cur = pts.copy()
    for _ in range(iterations):
        nxt = cur.copy()
        nxt[1:-1] = (1.0 - weight) * cur[1:-1] + (weight * 0.5) * (cur[:-2] + cur[2:])
        cur = nxt
    return cur


def _lint(a, b, ta, tb, t):
    """Safe knot interpolation: where tb == ta the blended points coincide."""
    dt = tb - ta
    with np.errstate(invalid="ignore", divide="ignore"):
        out = ((tb - t) * a + (t - ta) * b) / dt
    return np.where(dt > 0.0, out, a)


def catmull_rom_resample(pts, density):
    """Centripetal interpolation: each segment becomes `density` samples.

    Output has (n-1) * density + 1 points, passes through every input point,
    and duplicates the endpoints as phantom controls.
    """
    n = pts.shape[0]
    if n < 2:
        return pts.copy()
    ctrl = np.empty((n + 2, 2), dtype=np.float64)
    ctrl[1:-1] = pts
    ctrl[0] = pts[0]
    ctrl[-1] = pts[-1]
    # centripetal parameterization: knot increments are sqrt of segment length
    seg = np.sqrt(np.sqrt(((ctrl[1:] - ctrl[:-1]) ** 2).sum(axis=1)))

    n_seg = n - 1
    p0 = ctrl[0:n_seg]
    p1 = ctrl[1:n_seg + 1]
    p2 = ctrl[2:n_seg + 2]
    p3 = ctrl[3:n_seg + 3]
    t1 = seg[0:n_seg]
    t2 = t1 + seg[1:n_seg + 1]
    t3 = t2 + seg[2:n_seg + 2]

    u = np.arange(density, dtype=np.float64) / density              # (density,)
    t = (t1[:, None] + (t2 - t1)[:, None] * u[None, :])[..., None]  # (S, density, 1)

    def col(v):
        return v[:, None, :]

    t0c = np.zeros((n_seg, 1, 1))
    t1c = t1[:, None, None]
    t2c = t2[:, None, None]
    t3c = t3[:, None, None]
    a1 = _lint(col(p0), col(p1), t0c, t1c, t)
    a2 = _lint(col(p1), col(p2), t1c, t2c, t)
    a3 = _lint(col(p2), col(p3), t2c, t3c, t)
    b1 = _lint(a1, a2, t0c, t2c, t)
    b2 = _lint(a2, a3, t1c, t3c, t)
    out_seg = _lint(b1, b2, t1c, t2c, t)
    # interpolation property must hold exactly: pin the first sample of every
    # segment to its control point, and zero-length segments to a constant
    out_seg[:, 0, :] = p1
    degenerate = (t2 - t1) <= 0.0
    if np.any(degenerate):
        out_seg[degenerate] = p1[degenerate][:, None, :]

    out = np.empty((n_seg * density + 1, 2), dtype=np.float64)
    out[:-1] = out_seg.reshape(-1, 2)
    out[-1] = pts[-1]
    return out


def resample_uniform(pts, count):
    """`count` points equally spaced in arc length; endpoints preserved exactly."""
    seg = np.sqrt(((pts[1:] - pts[:-1]) ** 2).sum(axis=1))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    if not total > 0.0:
        raise ValueError("degenerate path: zero total length")
    targets = np.linspace(0.0, total, count)
    out = np.empty((count, 2), dtype=np.float64)
    out[:, 0] = np.interp(targets, cum, pts[:, 0])
    out[:, 1] = np.interp(targets, cum, pts[:, 1])
    out[0] = pts[0]
    out[-1] = pts[-1]
    return out
