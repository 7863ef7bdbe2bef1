"""Seeded synthetic corpora: orders and inventory shaped like the production
feed (four regional fulfillment hubs, heavy-tailed state demand, 3-level
product taxonomy), for demos and the acceptance suite.

The generator engineers the occupied (warehouse, region) pair set: the two
largest hubs ship to every region, the remaining hubs to all but one each, so
the default national corpus aggregates to exactly 202 flows. A small fraction
of rows can be deliberately corrupted to exercise the exclusion paths; at
least one valid row per pair is always preserved.
"""

from __future__ import annotations

import csv
import math
from typing import TextIO

import numpy as np

from .errors import InputError
from .geo import GeoPoint
from .ingest import RegionCentroidTable, Warehouse

WAREHOUSE_SHARES = {
    "WH-CA": 0.527,
    "WH-NJ": 0.333,
    "WH-TX": 0.084,
    "WH-IL": 0.056,
}

TAXONOMY: dict[str, dict[str, list[str]]] = {
    "Electronics": {
        "Computers": ["Laptops", "Desktops", "Monitors"],
        "Audio": ["Headphones", "Speakers"],
        "Mobile": ["Phones", "Tablets", "Chargers"],
    },
    "Apparel": {
        "Men": ["Shirts", "Pants", "Outerwear"],
        "Women": ["Dresses", "Tops", "Shoes"],
        "Kids": ["Tops", "Bottoms"],
    },
    "Home & Garden": {
        "Kitchen": ["Cookware", "Small Appliances"],
        "Furniture": ["Seating", "Tables"],
        "Garden": ["Hand Tools", "Planters"],
    },
    "Sports": {
        "Fitness": ["Weights", "Mats"],
        "Outdoor": ["Camping", "Cycling"],
    },
    "Toys": {
        "Games": ["Board Games", "Puzzles"],
        "Building": ["Blocks", "Model Kits"],
    },
    "Office": {
        "Supplies": ["Paper", "Pens"],
        "Equipment": ["Printers", "Shredders"],
    },
}

CATEGORY_WEIGHTS = {
    "Electronics": 0.28,
    "Apparel": 0.24,
    "Home & Garden": 0.22,
    "Sports": 0.12,
    "Toys": 0.08,
    "Office": 0.06,
}

# stock mix per warehouse: the NJ hub is deliberately light on Electronics and
# Apparel so demand/inventory mismatches show up in demos
INVENTORY_CATEGORY_WEIGHTS = {
    "WH-CA": {"Electronics": 0.34, "Apparel": 0.30, "Home & Garden": 0.16,
              "Sports": 0.09, "Toys": 0.06, "Office": 0.05},
    "WH-NJ": {"Electronics": 0.10, "Apparel": 0.16, "Home & Garden": 0.34,
              "Sports": 0.16, "Toys": 0.12, "Office": 0.12},
    "WH-TX": {"Electronics": 0.26, "Apparel": 0.22, "Home & Garden": 0.22,
              "Sports": 0.12, "Toys": 0.09, "Office": 0.09},
    "WH-IL": {"Electronics": 0.24, "Apparel": 0.20, "Home & Garden": 0.24,
              "Sports": 0.12, "Toys": 0.10, "Office": 0.10},
}
INVENTORY_WAREHOUSE_WEIGHTS = {"WH-CA": 0.42, "WH-NJ": 0.24, "WH-TX": 0.19, "WH-IL": 0.15}

ORDER_HEADER = (
    "order_id,shipper_lon,shipper_lat,dest_lon,dest_lat,quantity,value_usd,"
    "category_lvl1,category_lvl2,category_lvl3,date"
)


def _largest_remainder(n: int, weights: np.ndarray) -> np.ndarray:
    """Integer allocation of n by weight, exact total."""
    raw = weights / weights.sum() * n
    base = np.floor(raw).astype(np.int64)
    short = n - int(base.sum())
    if short > 0:
        order = np.argsort(-(raw - base), kind="stable")
        base[order[:short]] += 1
    return base


def _served_regions(warehouses: list[Warehouse], labels: list[str]) -> dict[str, list[str]]:
    """Two largest hubs serve every region; each remaining hub skips one."""
    shares = [WAREHOUSE_SHARES.get(w.id, 1.0 / len(warehouses)) for w in warehouses]
    ranked = [w.id for _, w in sorted(zip(shares, warehouses), key=lambda p: (-p[0], p[1].id))]
    served = {}
    skip_at = len(labels) - 1
    for rank, wid in enumerate(ranked):
        if rank < 2 or len(labels) < 2:
            served[wid] = list(labels)
        else:
            skipped = labels[skip_at % len(labels)]
            served[wid] = [lb for lb in labels if lb != skipped]
            skip_at -= 1
    return served


def generate_orders(
    n: int,
    seed: int,
    warehouses: list[Warehouse],
    regions: RegionCentroidTable,
    corrupt_frac: float = 0.01,
) -> list[dict[str, str]]:
    """n CSV rows (as dicts); deterministic for a given seed."""
    if n < 1:
        raise InputError("order count must be >= 1")
    if not warehouses or not regions:
        raise InputError("need at least one warehouse and one region")
    rng = np.random.default_rng(seed)
    labels = sorted(regions)
    cent = np.array([[regions[lb].lon, regions[lb].lat] for lb in labels])
    served = _served_regions(warehouses, labels)

    wh_ids = sorted(w.id for w in warehouses)
    wh_by_id = {w.id: w for w in warehouses}
    shares = np.array([WAREHOUSE_SHARES.get(wid, 1.0 / len(wh_ids)) for wid in wh_ids])
    per_wh = _largest_remainder(n, shares)

    # per-region sigma: a fraction of the gap to the nearest other centroid, so
    # sampled destinations keep their intended nearest-centroid region
    d2 = ((cent[:, None, :] - cent[None, :, :]) ** 2).sum(axis=2)
    np.fill_diagonal(d2, np.inf)
    sigma_deg = np.sqrt(d2.min(axis=1)) / 8.0

    pair_wid: list[str] = []
    pair_region: list[int] = []
    label_index = {lb: i for i, lb in enumerate(labels)}
    for wid, count in zip(wh_ids, per_wh):
        region_list = served[wid]
        if count < len(region_list):
            region_list = region_list[:max(int(count), 1)]
        weights = rng.lognormal(mean=0.0, sigma=1.1, size=len(region_list))
        alloc = _largest_remainder(int(count) - len(region_list), weights) + 1 \
            if count >= len(region_list) else _largest_remainder(int(count), weights)
        for lb, c in zip(region_list, alloc):
            pair_wid.extend([wid] * int(c))
            pair_region.extend([label_index[lb]] * int(c))

    region_idx = np.array(pair_region, dtype=np.int64)
    dest = cent[region_idx] + rng.normal(0.0, 1.0, size=(n, 2)) * sigma_deg[region_idx][:, None]
    for _ in range(6):
        nearest = ((dest[:, None, :] - cent[None, :, :]) ** 2).sum(axis=2).argmin(axis=1)
        bad = nearest != region_idx
        if not bad.any():
            break
        dest[bad] = cent[region_idx[bad]] + rng.normal(0.0, 1.0, size=(int(bad.sum()), 2)) \
            * (sigma_deg[region_idx[bad]][:, None] * 0.5)
    nearest = ((dest[:, None, :] - cent[None, :, :]) ** 2).sum(axis=2).argmin(axis=1)
    still_bad = nearest != region_idx
    dest[still_bad] = cent[region_idx[still_bad]]
    np.clip(dest[:, 0], -180.0, 180.0, out=dest[:, 0])
    np.clip(dest[:, 1], -90.0, 90.0, out=dest[:, 1])

    wh_loc = np.array([[wh_by_id[w].location.lon, wh_by_id[w].location.lat] for w in pair_wid])
    shipper = wh_loc + rng.normal(0.0, 0.05, size=(n, 2))
    all_wh_loc = np.array([[wh_by_id[w].location.lon, wh_by_id[w].location.lat] for w in wh_ids])
    nearest_wh = ((shipper[:, None, :] - all_wh_loc[None, :, :]) ** 2).sum(axis=2).argmin(axis=1)
    intended = np.array([wh_ids.index(w) for w in pair_wid])
    shipper[nearest_wh != intended] = wh_loc[nearest_wh != intended]

    quantities = 1 + rng.poisson(0.7, size=n)
    values = np.round(rng.lognormal(mean=3.5, sigma=0.9, size=n), 2)
    days = rng.integers(1, 32, size=n)
    lvl1_names = list(TAXONOMY)
    lvl1_weights = np.array([CATEGORY_WEIGHTS[c] for c in lvl1_names])
    lvl1_pick = rng.choice(len(lvl1_names), size=n, p=lvl1_weights / lvl1_weights.sum())
    u2 = rng.random(n)
    u3 = rng.random(n)

    perm = rng.permutation(n)
    rows: list[dict[str, str]] = []
    for out_i, i in enumerate(perm):
        lvl1 = lvl1_names[lvl1_pick[i]]
        lvl2_names = list(TAXONOMY[lvl1])
        lvl2 = lvl2_names[int(u2[i] * len(lvl2_names))]
        lvl3_names = TAXONOMY[lvl1][lvl2]
        lvl3 = lvl3_names[int(u3[i] * len(lvl3_names))]
        rows.append({
            "order_id": f"ORD-{out_i + 1:06d}",
            "shipper_lon": f"{shipper[i, 0]:.6f}",
            "shipper_lat": f"{shipper[i, 1]:.6f}",
            "dest_lon": f"{dest[i, 0]:.6f}",
            "dest_lat": f"{dest[i, 1]:.6f}",
            "quantity": str(int(quantities[i])),
            "value_usd": f"{values[i]:.2f}",
            "category_lvl1": lvl1,
            "category_lvl2": lvl2,
            "category_lvl3": lvl3,
            "date": f"2025-07-{int(days[i]):02d}",
            "_pair": f"{pair_wid[i]}:{labels[region_idx[i]]}",
        })

    _corrupt_rows(rows, corrupt_frac, rng)
    for row in rows:
        del row["_pair"]
    return rows


def _corrupt_rows(rows: list[dict[str, str]], corrupt_frac: float, rng) -> None:
    """Damage a deterministic subset while keeping >= 1 valid row per pair."""
    n_corrupt = int(len(rows) * corrupt_frac)
    if n_corrupt <= 0:
        return
    seen: set[str] = set()
    candidates = []
    for i, row in enumerate(rows):
        if row["_pair"] in seen:
            candidates.append(i)
        else:
            seen.add(row["_pair"])
    picked = rng.permutation(len(candidates))[:n_corrupt]
    for mode, c in enumerate(picked):
        i = candidates[c]
        kind = mode % 3
        if kind == 0:
            rows[i]["dest_lat"] = ""
        elif kind == 1:
            rows[i]["dest_lat"] = "95.0"
        else:
            rows[i]["value_usd"] = "n/a"


def generate_inventory(n: int, seed: int, warehouses: list[Warehouse]) -> list[dict[str, str]]:
    if n < 1:
        raise InputError("inventory record count must be >= 1")
    rng = np.random.default_rng(seed)
    wh_ids = sorted(w.id for w in warehouses)
    wh_weights = np.array([INVENTORY_WAREHOUSE_WEIGHTS.get(w, 1.0 / len(wh_ids)) for w in wh_ids])
    wh_pick = rng.choice(len(wh_ids), size=n, p=wh_weights / wh_weights.sum())
    # every warehouse gets at least one record
    for j in range(min(len(wh_ids), n)):
        wh_pick[j] = j
    stocks = np.maximum(0, rng.lognormal(mean=3.2, sigma=1.0, size=n).astype(np.int64))
    u1 = rng.random(n)
    u2 = rng.random(n)
    u3 = rng.random(n)

    lvl1_names = list(TAXONOMY)
    rows = []
    for i in range(n):
        wid = wh_ids[wh_pick[i]]
        weights = INVENTORY_CATEGORY_WEIGHTS.get(wid, CATEGORY_WEIGHTS)
        cum = 0.0
        lvl1 = lvl1_names[-1]
        total = sum(weights.get(c, 0.0) for c in lvl1_names)
        for c in lvl1_names:
            cum += weights.get(c, 0.0) / total
            if u1[i] <= cum:
                lvl1 = c
                break
        lvl2_names = list(TAXONOMY[lvl1])
        lvl2 = lvl2_names[int(u2[i] * len(lvl2_names))]
        lvl3_names = TAXONOMY[lvl1][lvl2]
        lvl3 = lvl3_names[int(u3[i] * len(lvl3_names))]
        rows.append({
            "warehouse_id": wid,
            "sku": f"SKU-{i + 1:05d}",
            "stock": str(int(stocks[i])),
            "category_lvl1": lvl1,
            "category_lvl2": lvl2,
            "category_lvl3": lvl3,
        })
    return rows


def write_csv(rows: list[dict[str, str]], header: list[str], out: TextIO) -> None:
    writer = csv.DictWriter(out, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
