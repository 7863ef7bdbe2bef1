"""Coordinate primitives, great-circle math, and the geo-to-grid mapping.

Geographic thresholds (long/short flow classification) are measured with
haversine kilometers; everything that happens on the bundling grid (density,
distance fields, attraction geometry) uses plain Euclidean distance in grid
coordinates. Warehouse assignment is the one deliberate exception: it uses raw
planar distance on (lon, lat) degrees, matching the upstream aggregation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InputError

EARTH_RADIUS_KM = 6371.0
KM_PER_DEG = math.pi * EARTH_RADIUS_KM / 180.0


@dataclass(frozen=True)
class GeoPoint:
    """A (longitude, latitude) pair in degrees, validated on construction."""

    lon: float
    lat: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lon) and math.isfinite(self.lat)):
            raise InputError(f"non-finite coordinate ({self.lon}, {self.lat})")
        if not -180.0 <= self.lon <= 180.0:
            raise InputError(f"longitude {self.lon} outside [-180, 180]")
        if not -90.0 <= self.lat <= 90.0:
            raise InputError(f"latitude {self.lat} outside [-90, 90]")


def haversine_km(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in kilometers on a mean-radius sphere."""
    la1 = math.radians(a.lat)
    la2 = math.radians(b.lat)
    dlat = la2 - la1
    dlon = math.radians(b.lon - a.lon)
    h = math.sin(dlat / 2.0) ** 2 + math.cos(la1) * math.cos(la2) * math.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def planar_deg_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Euclidean distance straight on (lon, lat) degrees. Used for nearest-warehouse
    and nearest-region-centroid assignment only; use :func:`haversine_km` for real
    distances."""
    return math.hypot(a.lon - b.lon, a.lat - b.lat)


def bearing_deg(origin: GeoPoint, dest: GeoPoint) -> float:
    """Initial great-circle bearing from origin to dest in [0, 360); 0 = north, 90 = east."""
    if origin.lon == dest.lon and origin.lat == dest.lat:
        raise InputError("degenerate edge: coincident endpoints")
    la1 = math.radians(origin.lat)
    la2 = math.radians(dest.lat)
    dlon = math.radians(dest.lon - origin.lon)
    x = math.sin(dlon) * math.cos(la2)
    y = math.cos(la1) * math.sin(la2) - math.sin(la1) * math.cos(la2) * math.cos(dlon)
    return math.degrees(math.atan2(x, y)) % 360.0


@dataclass(frozen=True)
class GridMapping:
    """Affine (equirectangular) map of a lon/lat bounding box onto [0, resolution)^2.

    Grid x grows with longitude, grid y with latitude. Cell (ix, iy) covers the
    half-open square [ix, ix+1) x [iy, iy+1); scalar fields are sampled at cell
    centers (ix + 0.5, iy + 0.5).
    """

    min_lon: float
    min_lat: float
    max_lon: float
    max_lat: float
    resolution: int = 128

    def __post_init__(self) -> None:
        if self.resolution < 8:
            raise InputError(f"grid resolution {self.resolution} must be >= 8")
        if not (self.min_lon < self.max_lon and self.min_lat < self.max_lat):
            raise InputError("grid bounds must satisfy min < max on both axes")

    @classmethod
    def from_points(
        cls,
        points: Iterable[GeoPoint],
        resolution: int = 128,
        margin_frac: float = 0.05,
    ) -> "GridMapping":
        """Bounding box of `points` expanded by `margin_frac` per side."""
        lons = [p.lon for p in points]
        lats = [p.lat for p in points]
        if not lons:
            raise InputError("cannot build a grid mapping from zero points")
        min_lon, max_lon = min(lons), max(lons)
        min_lat, max_lat = min(lats), max(lats)
        # degenerate extents (single point, or all collinear on one axis) get a
        # fixed pad so the mapping stays invertible
        span_lon = max(max_lon - min_lon, 1e-9)
        span_lat = max(max_lat - min_lat, 1e-9)
        if max_lon - min_lon < 1e-6:
            min_lon, max_lon = min_lon - 0.5, max_lon + 0.5
            span_lon = max_lon - min_lon
        if max_lat - min_lat < 1e-6:
            min_lat, max_lat = min_lat - 0.5, max_lat + 0.5
            span_lat = max_lat - min_lat
        pad_lon = span_lon * margin_frac
        pad_lat = span_lat * margin_frac
        return cls(
            min_lon=min_lon - pad_lon,
            min_lat=min_lat - pad_lat,
            max_lon=max_lon + pad_lon,
            max_lat=max_lat + pad_lat,
            resolution=resolution,
        )

    @property
    def _scale_x(self) -> float:
        return self.resolution / (self.max_lon - self.min_lon)

    @property
    def _scale_y(self) -> float:
        return self.resolution / (self.max_lat - self.min_lat)

    def contains(self, p: GeoPoint) -> bool:
        return self.min_lon <= p.lon <= self.max_lon and self.min_lat <= p.lat <= self.max_lat

    def project(self, p: GeoPoint) -> tuple[float, float]:
        """Continuous grid coordinates; out-of-bounds points are clamped into
        [0, resolution), never fatal."""
        x = (p.lon - self.min_lon) * self._scale_x
        y = (p.lat - self.min_lat) * self._scale_y
        hi = np.nextafter(float(self.resolution), 0.0)
        return (min(max(x, 0.0), hi), min(max(y, 0.0), hi))

    def unproject(self, x: float, y: float) -> GeoPoint:
        lon = self.min_lon + x / self._scale_x
        lat = self.min_lat + y / self._scale_y
        return GeoPoint(lon, lat)

    def project_array(self, lons: np.ndarray, lats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        hi = np.nextafter(float(self.resolution), 0.0)
        xs = np.clip((np.asarray(lons, dtype=np.float64) - self.min_lon) * self._scale_x, 0.0, hi)
        ys = np.clip((np.asarray(lats, dtype=np.float64) - self.min_lat) * self._scale_y, 0.0, hi)
        return xs, ys

    def unproject_array(self, xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Inverse of :meth:`project_array`; returns raw lon/lat arrays without
        range validation (synthetic grids may exceed geographic ranges)."""
        lons = self.min_lon + np.asarray(xs, dtype=np.float64) / self._scale_x
        lats = self.min_lat + np.asarray(ys, dtype=np.float64) / self._scale_y
        return lons, lats
