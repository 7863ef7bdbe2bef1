"""Command-line front door.

Subcommands:
    synth     generate a seeded synthetic orders/inventory corpus
    ingest    parse orders and aggregate them to warehouse-to-region flows
    bundle    bundle a flow file and emit GeoJSON paths
    hexbin    hexagonal density bins of order destinations
    sunburst  one warehouse's inventory hierarchy
    scene     compile viewer manifests ("all" plus one per warehouse)

Exit codes: 0 ok, 2 input/config error, 3 pipeline error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import importlib.resources
import json
import os
import sys
from pathlib import Path

from .config import PipelineConfig
from .errors import InputError, PipelineError
from .hexbin import HexGridSpec, default_origin, layer_to_dict
from .ingest import (
    aggregate_flows,
    flow_from_dict,
    flow_to_dict,
    load_regions,
    load_warehouses,
    parse_inventory,
    parse_orders,
)
from .inventory import build_hierarchy
from .scene import build_scene_manifests, bundle_flows_to_paths, manifest_json
from .synth import ORDER_HEADER, generate_inventory, generate_orders, write_csv

_DATA = importlib.resources.files("flowscene") / "data"
DEFAULT_WAREHOUSES = str(_DATA / "warehouses.csv")
DEFAULT_REGIONS = str(_DATA / "us_state_centroids.csv")


def _open_text(path: str, what: str):
    try:
        return open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc}") from exc


def _load_config(path: str | None) -> PipelineConfig:
    if path is None:
        cfg = PipelineConfig()
        cfg.validate()
        return cfg
    return PipelineConfig.from_json_file(path)


def _write_json(path: str, payload, sort_keys: bool = True) -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=sort_keys, separators=(",", ":"))
        fh.write("\n")


def cmd_synth(args) -> int:
    seed = args.seed if args.seed is not None else int(os.environ.get("SCENE_SEED", "42"))
    with _open_text(args.warehouses, "warehouses") as fh:
        warehouses = load_warehouses(fh)
    with _open_text(args.regions, "regions") as fh:
        regions = load_regions(fh)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = generate_orders(args.orders, seed, warehouses, regions,
                           corrupt_frac=args.corrupt_frac)
    orders_path = out_dir / "orders.csv"
    with open(orders_path, "w", encoding="utf-8", newline="") as fh:
        write_csv(rows, ORDER_HEADER.split(","), fh)
    print(f"wrote {len(rows)} orders to {orders_path} (seed {seed})")

    if args.inventory > 0:
        inv_rows = generate_inventory(args.inventory, seed + 1, warehouses)
        inv_path = out_dir / "inventory.csv"
        with open(inv_path, "w", encoding="utf-8", newline="") as fh:
            write_csv(inv_rows, list(inv_rows[0].keys()), fh)
        print(f"wrote {len(inv_rows)} inventory records to {inv_path}")
    return 0


def cmd_ingest(args) -> int:
    with _open_text(args.orders, "orders") as fh:
        orders, parse_report = parse_orders(fh)
    with _open_text(args.warehouses, "warehouses") as fh:
        warehouses = load_warehouses(fh)
    with _open_text(args.regions, "regions") as fh:
        regions = load_regions(fh)
    flows, agg_report = aggregate_flows(orders, warehouses, regions)
    if not flows:
        raise InputError("no flows: every order row was excluded")
    _write_json(args.out, [flow_to_dict(f) for f in flows])
    report = parse_report.to_dict()
    report["aggregation_excluded"] = agg_report.excluded
    report["flows"] = len(flows)
    if args.report:
        _write_json(args.report, report)
    ratio = parse_report.total_rows / len(flows)
    print(f"rows: {parse_report.total_rows}  included: {parse_report.included}  "
          f"excluded: {parse_report.excluded + agg_report.excluded}")
    print(f"flows: {len(flows)}")
    print(f"reduction ratio: {ratio:.1f}x")
    return 0


def _flows_from_file(path: str):
    with _open_text(path, "flows") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"flow file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, list) or not data:
        raise InputError(f"flow file {path} must be a non-empty JSON array")
    return [flow_from_dict(d) for d in data]


def cmd_bundle(args) -> int:
    config = _load_config(args.config)
    flows = _flows_from_file(args.flows)
    entries, report = bundle_flows_to_paths(flows, config)
    features = []
    for entry in entries:
        features.append({
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": entry["bundled_path"]},
            "properties": {
                "id": entry["id"],
                "origin_warehouse": entry["origin_warehouse"],
                "dest_region": entry["dest_region"],
                "order_count": entry["order_count"],
                "total_value_usd": entry["total_value_usd"],
                "length_km": entry["length_km"],
                "class": entry["class"],
            },
        })
    _write_json(args.out, {"type": "FeatureCollection", "features": features})
    if args.report:
        _write_json(args.report, report.to_dict(include_wall_time=True))
    print(f"bundled {len(flows)} flows -> {args.out} "
          f"({report.wall_time_ms:.0f} ms pipeline)")
    return 0


def cmd_hexbin(args) -> int:
    if args.radius_km <= 0:
        raise InputError(f"hex radius ({args.radius_km}) must be positive")
    with _open_text(args.orders, "orders") as fh:
        orders, _ = parse_orders(fh)
    if not orders:
        raise InputError("no valid orders to bin")
    spec = HexGridSpec(radius_km=args.radius_km, origin=default_origin(orders))
    layer = layer_to_dict(orders, spec)
    _write_json(args.out, layer)
    print(f"{len(layer['bins'])} bins ({sum(b['count'] for b in layer['bins'])} orders) -> {args.out}")
    return 0


def cmd_sunburst(args) -> int:
    with _open_text(args.inventory, "inventory") as fh:
        records, _ = parse_inventory(fh)
    tree = build_hierarchy(records, args.warehouse)
    _write_json(args.out, tree.to_dict())
    print(f"{args.warehouse}: {tree.stock_total} units -> {args.out}")
    return 0


def _compile_preset(payload):
    # module-level worker so the parallel path can use processes
    from .scene import compile_scene
    tag, orders, warehouses, regions, inventory, config = payload
    return tag, compile_scene(tag, orders, warehouses, regions, inventory, config)


def cmd_scene(args) -> int:
    config = _load_config(args.config)
    with _open_text(args.orders, "orders") as fh:
        orders, _ = parse_orders(fh)
    with _open_text(args.warehouses, "warehouses") as fh:
        warehouses = load_warehouses(fh)
    with _open_text(args.regions, "regions") as fh:
        regions = load_regions(fh)
    with _open_text(args.inventory, "inventory") as fh:
        inventory, _ = parse_inventory(fh)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        if args.parallel:
            from .ingest import assign_nearest_warehouse
            have_inventory = {r.warehouse_id for r in inventory}
            missing = [w.id for w in warehouses if w.id not in have_inventory]
            if missing:
                raise InputError(f"no inventory records for warehouses {missing}")
            subsets = {w.id: [] for w in warehouses}
            for order in orders:
                subsets[assign_nearest_warehouse(order, warehouses)].append(order)
            jobs = [("all", orders, warehouses, regions, inventory, config)]
            jobs += [(w.id, subsets[w.id], warehouses, regions, inventory, config)
                     for w in sorted(warehouses, key=lambda w: w.id)]
            manifests = {}
            with concurrent.futures.ProcessPoolExecutor() as pool:
                for tag, manifest in pool.map(_compile_preset, jobs):
                    manifests[tag] = manifest
        else:
            manifests = build_scene_manifests(orders, warehouses, regions, inventory, config)
        for tag, manifest in manifests.items():
            path = out_dir / f"{tag}.json"
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(manifest_json(manifest))
                fh.write("\n")
            written.append(path)
    except (InputError, PipelineError, OSError) as exc:
        # a failed preset must not leave a partial scene behind
        for path in written:
            path.unlink(missing_ok=True)
        if isinstance(exc, OSError):
            raise PipelineError(f"scene write failed: {exc}") from exc
        raise
    print(f"wrote {len(written)} scene manifests to {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flowscene",
                                     description="flow bundling and scene compilation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--orders", type=int, required=True, help="number of order rows")
    p.add_argument("--inventory", type=int, default=4000, help="number of inventory rows (0 = skip)")
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: SCENE_SEED env var, else 42)")
    p.add_argument("--corrupt-frac", type=float, default=0.01)
    p.add_argument("--warehouses", default=DEFAULT_WAREHOUSES)
    p.add_argument("--regions", default=DEFAULT_REGIONS)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="aggregate orders into flows")
    p.add_argument("--orders", required=True)
    p.add_argument("--warehouses", default=DEFAULT_WAREHOUSES)
    p.add_argument("--regions", default=DEFAULT_REGIONS)
    p.add_argument("--out", required=True, help="flows JSON output path")
    p.add_argument("--report", default=None, help="exclusion report JSON path")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("bundle", help="bundle flows into GeoJSON paths")
    p.add_argument("--flows", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True, help="GeoJSON output path")
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_bundle)

    p = sub.add_parser("hexbin", help="hexagonal density bins of destinations")
    p.add_argument("--orders", required=True)
    p.add_argument("--radius-km", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_hexbin)

    p = sub.add_parser("sunburst", help="inventory hierarchy for one warehouse")
    p.add_argument("--inventory", required=True)
    p.add_argument("--warehouse", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sunburst)

    p = sub.add_parser("scene", help="compile all viewer manifests")
    p.add_argument("--orders", required=True)
    p.add_argument("--warehouses", default=DEFAULT_WAREHOUSES)
    p.add_argument("--regions", default=DEFAULT_REGIONS)
    p.add_argument("--inventory", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--parallel", action="store_true", help="build presets in parallel processes")
    p.set_defaults(func=cmd_scene)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PipelineError as exc:
        print(f"pipeline error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
