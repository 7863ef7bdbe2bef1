"""Scene compilation: one self-contained manifest per filter preset.

A manifest bundles everything the viewer needs for one flow subset: straight
and bundled flow geometry (so toggling bundling never recomputes), hex density
layers at each configured radius, per-warehouse inventory sunbursts, and the
bundling report. Any flow-subset change alters the density field and skeleton,
so each preset is fully rebundled here, offline.

Geographic coordinates are rounded to 9 decimal places before serialization;
re-reading and re-writing a manifest is byte-stable. The embedded report
deliberately omits wall time so identical runs produce identical bytes.
"""

from __future__ import annotations

import json
from typing import Sequence

import numpy as np

from .bundling import bundle
from .config import PipelineConfig
from .errors import InputError, PipelineError
from .geo import GeoPoint
from .hexbin import HexGridSpec, default_origin, layer_to_dict
from .ingest import (
    FlowEdge,
    InventoryRecord,
    OrderRecord,
    RegionCentroidTable,
    Warehouse,
    aggregate_flows,
    assign_nearest_warehouse,
)
from .inventory import build_hierarchy
from .smoothing import resample_uniform, smooth_pipeline

SCHEMA_VERSION = 1


def _geo_path(points_grid: np.ndarray, mapping) -> list[list[float]]:
    lons, lats = mapping.unproject_array(points_grid[:, 0], points_grid[:, 1])
    return [[round(float(lon), 9), round(float(lat), 9)] for lon, lat in zip(lons, lats)]


def bundle_flows_to_paths(
    flows: Sequence[FlowEdge],
    config: PipelineConfig,
):
    """Bundle + smooth a flow set; returns per-flow geometry dicts and the
    pipeline report."""
    polylines, report = bundle(flows, config.bundle)
    mapping = report.mapping
    entries = []
    for poly, flow in zip(polylines, flows):
        straight = np.empty_like(poly.points)
        ts = np.linspace(0.0, 1.0, poly.points.shape[0])
        x0, y0 = mapping.project(flow.origin_location)
        x1, y1 = mapping.project(flow.dest_centroid)
        straight[:, 0] = x0 + (x1 - x0) * ts
        straight[:, 1] = y0 + (y1 - y0) * ts
        straight[0] = (x0, y0)
        straight[-1] = (x1, y1)
        if poly.flow_class == "excluded":
            final = resample_uniform(poly.points, config.smoothing.final_point_count)
        else:
            final = smooth_pipeline(poly.points, config.smoothing)
        entries.append({
            "id": flow.flow_id,
            "origin_warehouse": flow.origin_warehouse,
            "dest_region": flow.dest_region,
            "order_count": flow.order_count,
            "total_value_usd": round(flow.total_value_cents / 100.0, 2),
            "category_hist": dict(sorted(flow.category_hist.items())),
            "length_km": round(flow.length_km, 3),
            "class": poly.flow_class,
            "straight_path": _geo_path(straight, mapping),
            "bundled_path": _geo_path(final, mapping),
        })
    return entries, report


def compile_scene(
    filter_tag: str,
    orders: list[OrderRecord],
    warehouses: list[Warehouse],
    regions: RegionCentroidTable,
    inventory: list[InventoryRecord],
    config: PipelineConfig,
) -> dict:
    """Build one manifest for the given (already filtered) order subset."""
    flows, _ = aggregate_flows(orders, warehouses, regions)
    if not flows:
        raise PipelineError(f"preset {filter_tag!r} has no flows")
    flow_entries, report = bundle_flows_to_paths(flows, config)
    report_dict = report.to_dict(include_wall_time=False)

    origin = default_origin(orders)
    hex_layers = [
        layer_to_dict(orders, HexGridSpec(radius_km=r, origin=origin))
        for r in config.hex_radii_km
    ]
    for layer in hex_layers:
        layer["origin"] = {
            "lon": round(layer["origin"]["lon"], 9),
            "lat": round(layer["origin"]["lat"], 9),
        }
        for b in layer["bins"]:
            b["lon"] = round(b["lon"], 9)
            b["lat"] = round(b["lat"], 9)

    sunbursts = {
        w.id: build_hierarchy(inventory, w.id).to_dict()
        for w in sorted(warehouses, key=lambda w: w.id)
    }
    return {
        "version": SCHEMA_VERSION,
        "filter_tag": filter_tag,
        "warehouses": [
            {"id": w.id, "name": w.display_name,
             "lon": round(w.location.lon, 9), "lat": round(w.location.lat, 9)}
            for w in sorted(warehouses, key=lambda w: w.id)
        ],
        "flows": flow_entries,
        "hex_layers": hex_layers,
        "sunbursts": sunbursts,
        "report": report_dict,
    }


def build_scene_manifests(
    orders: list[OrderRecord],
    warehouses: list[Warehouse],
    regions: RegionCentroidTable,
    inventory: list[InventoryRecord],
    config: PipelineConfig,
) -> dict[str, dict]:
    """Manifests for every preset: "all" plus one per warehouse."""
    have_inventory = {r.warehouse_id for r in inventory}
    missing = [w.id for w in warehouses if w.id not in have_inventory]
    if missing:
        raise InputError(f"no inventory records for warehouses {missing}")

    by_warehouse: dict[str, list[OrderRecord]] = {w.id: [] for w in warehouses}
    for order in orders:
        by_warehouse[assign_nearest_warehouse(order, warehouses)].append(order)

    manifests = {"all": compile_scene("all", orders, warehouses, regions, inventory, config)}
    for w in sorted(warehouses, key=lambda w: w.id):
        manifests[w.id] = compile_scene(
            w.id, by_warehouse[w.id], warehouses, regions, inventory, config,
        )
    return manifests


def manifest_json(manifest: dict) -> str:
    return json.dumps(manifest, sort_keys=True, separators=(",", ":"))
