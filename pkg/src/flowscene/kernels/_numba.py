"""Numba-compiled twins of the kernels in ``_numpy``.

Same signatures, same arithmetic grouping, so results match the reference lane
to floating-point noise (exactly, for the integer distance transform).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._codes import CLS_BYPASS, CLS_EXCLUDED, CLS_LONG, CLS_SHORT


@njit(cache=True)
def splat_gaussian(acc, xs, ys, ws, sigma, radius):
    rows, cols = acc.shape
    inv = 1.0 / (2.0 * sigma * sigma)
    r2max = radius * radius
    for m in range(xs.shape[0]):
        x = xs[m]
        y = ys[m]
        w = ws[m]
        x0 = max(int(math.floor(x - radius - 0.5)), 0)
        x1 = min(int(math.ceil(x + radius - 0.5)), cols - 1)
        y0 = max(int(math.floor(y - radius - 0.5)), 0)
        y1 = min(int(math.ceil(y + radius - 0.5)), rows - 1)
        for cy in range(y0, y1 + 1):
            dy = (cy + 0.5) - y
            for cx in range(x0, x1 + 1):
                dx = (cx + 0.5) - x
                d2 = dx * dx + dy * dy
                if d2 <= r2max:
                    acc[cy, cx] += math.exp(-d2 * inv) * w
    return acc


@njit(cache=True)
def _envelope_row(f, n, v, z, out):
    # lower envelope of parabolas j -> f[j] + (q - j)^2, exact for integer f
    k = 0
    v[0] = 0
    z[0] = -1e300
    z[1] = 1e300
    for q in range(1, n):
        fq = float(f[q]) + q * q
        p = v[k]
        s = (fq - (float(f[p]) + p * p)) / (2.0 * q - 2.0 * p)
        while s <= z[k]:
            k -= 1
            p = v[k]
            s = (fq - (float(f[p]) + p * p)) / (2.0 * q - 2.0 * p)
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = 1e300
    k = 0
    for q in range(n):
        while z[k + 1] < q:
            k += 1
        p = v[k]
        out[q] = f[p] + (q - p) * (q - p)


@njit(cache=True)
def edt_squared(site):
    rows, cols = site.shape
    big = rows + cols + 1
    d = np.empty((rows, cols), dtype=np.int64)
    for y in range(rows):
        for x in range(cols):
            d[y, x] = 0 if site[y, x] else big
    for y in range(1, rows):
        for x in range(cols):
            if d[y - 1, x] + 1 < d[y, x]:
                d[y, x] = d[y - 1, x] + 1
    for y in range(rows - 2, -1, -1):
        for x in range(cols):
            if d[y + 1, x] + 1 < d[y, x]:
                d[y, x] = d[y + 1, x] + 1

    out = np.empty((rows, cols), dtype=np.int64)
    f = np.empty(cols, dtype=np.int64)
    row_out = np.empty(cols, dtype=np.int64)
    v = np.empty(cols + 1, dtype=np.int64)
    z = np.empty(cols + 2, dtype=np.float64)
    for y in range(rows):
        for x in range(cols):
            f[x] = d[y, x] * d[y, x]
        _envelope_row(f, cols, v, z, row_out)
        for x in range(cols):
            out[y, x] = row_out[x]
    return out


@njit(cache=True)
def attract_pass(pts, cls, indptr, vidx, skx, sky, skw,
                 alpha, long_bonus, short_factor, dot_min):
    n_edges, n_pts, _ = pts.shape
    k = n_pts - 1
    new = pts.copy()
    chosen = np.full((n_edges, n_pts), -1, dtype=np.int32)
    for e in range(n_edges):
        c = cls[e]
        if c != CLS_LONG and c != CLS_SHORT:
            continue
        lo = indptr[e]
        hi = indptr[e + 1]
        if hi <= lo:
            continue
        ux = pts[e, k, 0] - pts[e, 0, 0]
        uy = pts[e, k, 1] - pts[e, 0, 1]
        seg_len = math.sqrt(ux * ux + uy * uy)
        if seg_len <= 0.0:
            continue
        ux /= seg_len
        uy /= seg_len
        beta = long_bonus if c == CLS_LONG else short_factor
        for i in range(1, k):
            px = pts[e, i, 0]
            py = pts[e, i, 1]
            best = -1
            best_d2 = np.inf
            for jj in range(lo, hi):
                j = vidx[jj]
                dx = skx[j] - px
                dy = sky[j] - py
                d2 = dx * dx + dy * dy
                if d2 > 0.0:
                    dn = math.sqrt(d2)
                    dot = (dx * ux + dy * uy) / dn
                    if not dot > dot_min:
                        continue
                if d2 < best_d2:
                    best_d2 = d2
                    best = j
            if best >= 0:
                chosen[e, i] = best
                phi = 4.0 * (i / k) * (1.0 - i / k)
                f = ((alpha * beta) * phi) * skw[best]
                new[e, i, 0] = px + f * (skx[best] - px)
                new[e, i, 1] = py + f * (sky[best] - py)
    return new, chosen


@njit(cache=True)
def cohesion_pass(pts, cls, cluster_id, n_clusters, c_long, w_short):
    n_edges, n_pts, _ = pts.shape
    new = pts.copy()
    sums = np.zeros((n_clusters, n_pts, 2), dtype=np.float64)
    counts = np.zeros(n_clusters, dtype=np.float64)
    for e in range(n_edges):
        cid = cluster_id[e]
        counts[cid] += 1.0
        for i in range(n_pts):
            sums[cid, i, 0] += pts[e, i, 0]
            sums[cid, i, 1] += pts[e, i, 1]
    for e in range(n_edges):
        c = cls[e]
        if c == CLS_LONG:
            cid = cluster_id[e]
            cnt = counts[cid]
            for i in range(1, n_pts - 1):
                cen_x = sums[cid, i, 0] / cnt
                cen_y = sums[cid, i, 1] / cnt
                new[e, i, 0] = pts[e, i, 0] + c_long * (cen_x - pts[e, i, 0])
                new[e, i, 1] = pts[e, i, 1] + c_long * (cen_y - pts[e, i, 1])
        elif c == CLS_SHORT or c == CLS_BYPASS:
            for i in range(1, n_pts - 1):
                avg_x = 0.5 * (pts[e, i - 1, 0] + pts[e, i + 1, 0])
                avg_y = 0.5 * (pts[e, i - 1, 1] + pts[e, i + 1, 1])
                new[e, i, 0] = pts[e, i, 0] + w_short * (avg_x - pts[e, i, 0])
                new[e, i, 1] = pts[e, i, 1] + w_short * (avg_y - pts[e, i, 1])
    return new


@njit(cache=True)
def gaussian_smooth(pts, iterations, weight):
    n = pts.shape[0]
    cur = pts.copy()
    if n < 3 or iterations <= 0:
        return cur
    nxt = np.empty_like(cur)
    for _ in range(iterations):
        nxt[0] = cur[0]
        nxt[n - 1] = cur[n - 1]
        for i in range(1, n - 1):
            nxt[i, 0] = (1.0 - weight) * cur[i, 0] + (weight * 0.5) * (cur[i - 1, 0] + cur[i + 1, 0])
            nxt[i, 1] = (1.0 - weight) * cur[i, 1] + (weight * 0.5) * (cur[i - 1, 1] + cur[i + 1, 1])
        cur, nxt = nxt, cur
    return cur.copy()


@njit(cache=True)
def _lint1(ax, ay, bx, by, ta, tb, t):
    dt = tb - ta
    if dt > 0.0:
        wx = ((tb - t) * ax + (t - ta) * bx) / dt
        wy = ((tb - t) * ay + (t - ta) * by) / dt
        return wx, wy
    return ax, ay


@njit(cache=True)
def catmull_rom_resample(pts, density):
    n = pts.shape[0]
    if n < 2:
        return pts.copy()
    ctrl = np.empty((n + 2, 2), dtype=np.float64)
    ctrl[1:-1] = pts
    ctrl[0] = pts[0]
    ctrl[n + 1] = pts[n - 1]
    seg = np.empty(n + 1, dtype=np.float64)
    for i in range(n + 1):
        dx = ctrl[i + 1, 0] - ctrl[i, 0]
        dy = ctrl[i + 1, 1] - ctrl[i, 1]
        seg[i] = math.sqrt(math.sqrt(dx * dx + dy * dy))

    n_seg = n - 1
    out = np.empty((n_seg * density + 1, 2), dtype=np.float64)
    for j in range(n_seg):
        t1 = seg[j]
        t2 = t1 + seg[j + 1]
        t3 = t2 + seg[j + 2]
        base = j * density
        out[base, 0] = ctrl[j + 1, 0]
        out[base, 1] = ctrl[j + 1, 1]
        if t2 - t1 <= 0.0:
            for m in range(1, density):
                out[base + m, 0] = ctrl[j + 1, 0]
                out[base + m, 1] = ctrl[j + 1, 1]
            continue
        for m in range(1, density):
            t = t1 + (t2 - t1) * (m / density)
            a1x, a1y = _lint1(ctrl[j, 0], ctrl[j, 1], ctrl[j + 1, 0], ctrl[j + 1, 1], 0.0, t1, t)
            a2x, a2y = _lint1(ctrl[j + 1, 0], ctrl[j + 1, 1], ctrl[j + 2, 0], ctrl[j + 2, 1], t1, t2, t)
            a3x, a3y = _lint1(ctrl[j + 2, 0], ctrl[j + 2, 1], ctrl[j + 3, 0], ctrl[j + 3, 1], t2, t3, t)
            b1x, b1y = _lint1(a1x, a1y, a2x, a2y, 0.0, t2, t)
            b2x, b2y = _lint1(a2x, a2y, a3x, a3y, t1, t3, t)
            cx, cy = _lint1(b1x, b1y, b2x, b2y, t1, t2, t)
            out[base + m, 0] = cx
            out[base + m, 1] = cy
    out[n_seg * density, 0] = pts[n - 1, 0]
    out[n_seg * density, 1] = pts[n - 1, 1]
    return out


@njit(cache=True)
def resample_uniform(pts, count):
    n = pts.shape[0]
    cum = np.empty(n, dtype=np.float64)
    cum[0] = 0.0
    for i in range(1, n):
        dx = pts[i, 0] - pts[i - 1, 0]
        dy = pts[i, 1] - pts[i - 1, 1]
        cum[i] = cum[i - 1] + math.sqrt(dx * dx + dy * dy)
    total = cum[n - 1]
    if not total > 0.0:
        raise ValueError("degenerate path: zero total length")
    targets = np.linspace(0.0, total, count)
    out = np.empty((count, 2), dtype=np.float64)
    out[:, 0] = np.interp(targets, cum, pts[:, 0])
    out[:, 1] = np.interp(targets, cum, pts[:, 1])
    out[0] = pts[0]
    out[count - 1] = pts[n - 1]
    return out
