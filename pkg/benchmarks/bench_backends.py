#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy reference lane.

Times each hot kernel and the full bundle+smooth pipeline on a synthetic
202-flow national scene, and cross-checks that both lanes agree.

    python3 benchmarks/bench_backends.py --repeat 5
"""

from __future__ import annotations

import argparse
import io
import time

import numpy as np


def build_scene():
    from flowscene.cli import DEFAULT_REGIONS, DEFAULT_WAREHOUSES
    from flowscene.ingest import aggregate_flows, load_regions, load_warehouses, parse_orders
    from flowscene.synth import ORDER_HEADER, generate_orders, write_csv

    with open(DEFAULT_WAREHOUSES) as fh:
        warehouses = load_warehouses(fh)
    with open(DEFAULT_REGIONS) as fh:
        regions = load_regions(fh)
    rows = generate_orders(20_000, 42, warehouses, regions, corrupt_frac=0.0)
    buf = io.StringIO()
    write_csv(rows, ORDER_HEADER.split(","), buf)
    buf.seek(0)
    orders, _ = parse_orders(buf)
    flows, _ = aggregate_flows(orders, warehouses, regions)
    return flows


def kernel_inputs(flows):
    from flowscene.bundling import (
        _candidate_csr,
        _skeleton_arrays,
        build_density_field,
        compute_edt,
        extract_skeleton,
        flow_mapping,
        initial_polylines,
    )
    from flowscene.config import BundleParams

    params = BundleParams()
    mapping = flow_mapping(flows, params)
    n = params.density_samples
    ts = np.linspace(0.0, 1.0, n)
    xs = np.empty(len(flows) * n)
    ys = np.empty_like(xs)
    ws = np.empty_like(xs)
    for i, f in enumerate(flows):
        x0, y0 = mapping.project(f.origin_location)
        x1, y1 = mapping.project(f.dest_centroid)
        sl = slice(i * n, (i + 1) * n)
        xs[sl] = x0 + (x1 - x0) * ts
        ys[sl] = y0 + (y1 - y0) * ts
        ws[sl] = float(f.order_count)

    density = build_density_field(flows, mapping, params)
    dist = compute_edt(density, params.density_threshold_frac)
    skeleton = extract_skeleton(dist)
    skx, sky, skw = _skeleton_arrays(skeleton)

    from flowscene.bundling import classify_flow
    classes = np.array([classify_flow(f, params) for f in flows], dtype=np.int8)
    pts = initial_polylines(flows, mapping, params)
    indptr, vidx = _candidate_csr(pts, classes, skx, sky, params)
    site = ~dist.mask
    return {
        "params": params,
        "splat": (np.zeros((128, 128)), xs, ys, ws, params.sigma,
                  params.truncate_sigmas * params.sigma),
        "site": site,
        "attract": (pts, classes, indptr, vidx, skx, sky, skw,
                    params.alpha, params.long_bonus, params.short_factor,
                    params.forward_dot_min),
        "smooth_poly": pts[0].copy(),
    }


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_lane(impl, inputs, repeat):
    results = {}
    acc, xs, ys, ws, sigma, radius = inputs["splat"]
    results["splat_gaussian"] = timeit(
        lambda: impl.splat_gaussian(np.zeros_like(acc), xs, ys, ws, sigma, radius), repeat)
    results["edt_squared"] = timeit(lambda: impl.edt_squared(inputs["site"]), repeat)
    results["attract_pass"] = timeit(lambda: impl.attract_pass(*inputs["attract"]), repeat)
    poly = inputs["smooth_poly"]

    def smooth_chain():
        cur = impl.gaussian_smooth(poly, 15, 0.55)
        for dens, (it, w) in zip((10, 8, 4), ((10, 0.45), (8, 0.35), (4, 0.25))):
            cur = impl.catmull_rom_resample(cur, dens)
            cur = impl.gaussian_smooth(cur, it, w)
        return impl.resample_uniform(cur, 100)

    results["smoothing_chain"] = timeit(smooth_chain, repeat)
    return results


def bench_full_pipeline(flows, repeat):
    from flowscene.bundling import bundle
    from flowscene.config import PipelineConfig
    from flowscene.smoothing import resample_uniform, smooth_pipeline

    config = PipelineConfig()

    def run():
        polylines, _ = bundle(flows, config.bundle)
        for poly in polylines:
            if poly.flow_class == "excluded":
                resample_uniform(poly.points, config.smoothing.final_point_count)
            else:
                smooth_pipeline(poly.points, config.smoothing)

    return timeit(run, repeat)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    from flowscene.kernels import _numpy as lane_np
    try:
        from flowscene.kernels import _numba as lane_nb
    except ImportError:
        lane_nb = None
        print("numba unavailable; benchmarking the numpy lane only")

    flows = build_scene()
    print(f"scene: {len(flows)} flows, 128x128 grid")
    inputs = kernel_inputs(flows)

    if lane_nb is not None:
        bench_lane(lane_nb, inputs, 1)  # trigger compilation before timing

    res_np = bench_lane(lane_np, inputs, args.repeat)
    res_nb = bench_lane(lane_nb, inputs, args.repeat) if lane_nb else None

    print(f"\n{'kernel':<18} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for name, t_np in res_np.items():
        if res_nb:
            t_nb = res_nb[name]
            print(f"{name:<18} {t_np * 1e3:>10.2f}ms {t_nb * 1e3:>10.2f}ms {t_np / t_nb:>8.1f}x")
        else:
            print(f"{name:<18} {t_np * 1e3:>10.2f}ms {'-':>12} {'-':>9}")

    # agreement spot-checks
    if lane_nb is not None:
        a = np.zeros((128, 128))
        b = np.zeros((128, 128))
        _, xs, ys, ws, sigma, radius = inputs["splat"]
        lane_np.splat_gaussian(a, xs, ys, ws, sigma, radius)
        lane_nb.splat_gaussian(b, xs, ys, ws, sigma, radius)
        assert np.max(np.abs(a - b)) < 1e-9 * max(1.0, a.max())
        assert np.array_equal(lane_np.edt_squared(inputs["site"]),
                              lane_nb.edt_squared(inputs["site"]))
        print("\nlane agreement: EDT exact, splat within float noise")

    import os
    for backend in (["numpy", "numba"] if lane_nb else ["numpy"]):
        os.environ["FLOWSCENE_BACKEND"] = backend
        import importlib
        import flowscene.kernels as K
        importlib.reload(K)
        import flowscene.clustering, flowscene.bundling, flowscene.smoothing
        importlib.reload(flowscene.clustering)
        importlib.reload(flowscene.bundling)
        importlib.reload(flowscene.smoothing)
        t = bench_full_pipeline(flows, max(1, args.repeat // 2))
        print(f"full bundle+smooth ({backend:>5}): {t * 1e3:8.1f} ms")


if __name__ == "__main__":
    main()
