"""Hexagonal aggregation of delivery destinations.

Pointy-top axial grid in a local planar kilometer frame (equirectangular about
the grid origin), so the configured radii are honest kilometers at the scene's
latitude. The radius is the hexagon circumradius.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .geo import GeoPoint, KM_PER_DEG
from .ingest import OrderRecord

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class HexGridSpec:
    radius_km: float
    origin: GeoPoint

    def __post_init__(self) -> None:
        if not self.radius_km > 0:
            raise InputError(f"hex radius ({self.radius_km}) must be positive")


@dataclass
class HexBin:
    axial: tuple[int, int]
    center: GeoPoint
    count: int
    category_hist: dict[str, int] = field(default_factory=dict)

    @property
    def dominant(self) -> str:
        return min(self.category_hist.items(), key=lambda kv: (-kv[1], kv[0]))[0]


def _to_km_frame(lons: np.ndarray, lats: np.ndarray, spec: HexGridSpec) -> tuple[np.ndarray, np.ndarray]:
    cos0 = math.cos(math.radians(spec.origin.lat))
    x = (lons - spec.origin.lon) * KM_PER_DEG * cos0
    y = (lats - spec.origin.lat) * KM_PER_DEG
    return x, y


def _from_km_frame(x: float, y: float, spec: HexGridSpec) -> GeoPoint:
    cos0 = math.cos(math.radians(spec.origin.lat))
    return GeoPoint(
        spec.origin.lon + x / (KM_PER_DEG * cos0),
        spec.origin.lat + y / KM_PER_DEG,
    )


def _axial_from_xy(x: np.ndarray, y: np.ndarray, size: float) -> tuple[np.ndarray, np.ndarray]:
    """Fractional axial coordinates -> nearest hex via cube rounding."""
    qf = (SQRT3 / 3.0 * x - y / 3.0) / size
    rf = (2.0 / 3.0 * y) / size
    sf = -qf - rf
    q = np.round(qf)
    r = np.round(rf)
    s = np.round(sf)
    dq = np.abs(q - qf)
    dr = np.abs(r - rf)
    ds = np.abs(s - sf)
    fix_q = (dq > dr) & (dq > ds)
    fix_r = ~fix_q & (dr > ds)
    q = np.where(fix_q, -r - s, q)
    r = np.where(fix_r, -q - s, r)
    return q.astype(np.int64), r.astype(np.int64)


def hex_center_km(q: int, r: int, size: float) -> tuple[float, float]:
    return size * (SQRT3 * q + SQRT3 / 2.0 * r), size * 1.5 * r


def hex_center(q: int, r: int, spec: HexGridSpec) -> GeoPoint:
    x, y = hex_center_km(q, r, spec.radius_km)
    return _from_km_frame(x, y, spec)


def hex_assign(p: GeoPoint, spec: HexGridSpec) -> tuple[int, int]:
    x, y = _to_km_frame(np.array([p.lon]), np.array([p.lat]), spec)
    q, r = _axial_from_xy(x, y, spec.radius_km)
    return int(q[0]), int(r[0])


def default_origin(orders: list[OrderRecord]) -> GeoPoint:
    """Anchor the grid at the destination centroid so outputs are reproducible."""
    if not orders:
        return GeoPoint(0.0, 0.0)
    lon = sum(o.destination.lon for o in orders) / len(orders)
    lat = sum(o.destination.lat for o in orders) / len(orders)
    return GeoPoint(lon, lat)


def hex_binning(orders: list[OrderRecord], spec: HexGridSpec) -> list[HexBin]:
    """One bin per occupied hexagon, with level-1 category histograms.

    Count is conserved: every order lands in exactly one bin. Output sorted by
    axial coordinates; independent of input order.
    """
    if not orders:
        return []
    lons = np.array([o.destination.lon for o in orders])
    lats = np.array([o.destination.lat for o in orders])
    x, y = _to_km_frame(lons, lats, spec)
    qs, rs = _axial_from_xy(x, y, spec.radius_km)

    hists: dict[tuple[int, int], Counter] = {}
    for order, q, r in zip(orders, qs, rs):
        key = (int(q), int(r))
        hist = hists.get(key)
        if hist is None:
            hist = Counter()
            hists[key] = hist
        hist[order.category_lvl1] += 1

    bins = []
    for key in sorted(hists):
        hist = hists[key]
        bins.append(HexBin(
            axial=key,
            center=hex_center(key[0], key[1], spec),
            count=sum(hist.values()),
            category_hist=dict(sorted(hist.items())),
        ))
    return bins


def top_k_categories(hex_bin: HexBin, k: int) -> list[tuple[str, int]]:
    """Descending by count, ties broken lexicographically."""
    if k < 1:
        raise InputError(f"k ({k}) must be >= 1")
    ranked = sorted(hex_bin.category_hist.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def bin_to_dict(hex_bin: HexBin) -> dict:
    return {
        "q": hex_bin.axial[0],
        "r": hex_bin.axial[1],
        "lon": hex_bin.center.lon,
        "lat": hex_bin.center.lat,
        "count": hex_bin.count,
        "dominant": hex_bin.dominant,
        "top_categories": [[label, count] for label, count in top_k_categories(hex_bin, 5)],
    }


def layer_to_dict(orders: list[OrderRecord], spec: HexGridSpec) -> dict:
    return {
        "radius_km": spec.radius_km,
        "origin": {"lon": spec.origin.lon, "lat": spec.origin.lat},
        "bins": [bin_to_dict(b) for b in hex_binning(orders, spec)],
    }
