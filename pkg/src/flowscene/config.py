"""Pipeline configuration: bundling constants, smoothing schedule, hex radii.

All defaults are the tuned values the bundling geometry depends on. The
algorithmic fields (grid resolution, kernel width, detour thresholds, the
exclusion list) should stay fixed for a given network; purely visual knobs
live in the viewer, not here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from typing import Any

from .errors import InputError

DEFAULT_EXCLUSIONS: tuple[tuple[str, str], ...] = (
    ("WH-CA", "NV"),
    ("WH-TX", "LA"),
)


@dataclass(frozen=True)
class BundleParams:
    """Constants controlling the bundling pipeline."""

    grid_resolution: int = 128
    sigma: float = 1.5                  # Gaussian splat width, grid cells
    density_samples: int = 11           # points sampled per edge when splatting
    subdivisions: int = 64              # k; polylines carry k+1 control points
    iterations: int = 15                # attraction/cohesion rounds
    alpha: float = 0.35                 # global attraction strength
    tau_long: float = 0.4               # detour-ratio bound, flows > long_km
    tau_short: float = 0.15             # detour-ratio bound, shorter flows
    long_km: float = 500.0
    bypass_km: float = 300.0            # below this, skip skeleton attraction
    density_threshold_frac: float = 0.10
    forward_dot_min: float = 0.3
    projection_min: float = -0.1
    projection_max: float = 1.1
    long_bonus: float = 1.2             # displacement multiplier, long flows
    short_factor: float = 0.6           # displacement multiplier, short flows
    cohesion_max: float = 0.35          # cluster cohesion cap, reached at t = T
    neighbor_weight: float = 0.10       # neighbor averaging weight, short flows
    margin_frac: float = 0.05           # grid bounds padding per side
    truncate_sigmas: float = 6.0        # splat support radius in sigmas
    exclusions: tuple[tuple[str, str], ...] = DEFAULT_EXCLUSIONS

    def validate(self) -> None:
        positive = (
            "grid_resolution", "sigma", "density_samples", "subdivisions",
            "iterations", "alpha", "tau_long", "tau_short", "long_km",
            "bypass_km", "density_threshold_frac", "forward_dot_min",
            "long_bonus", "short_factor", "cohesion_max", "neighbor_weight",
            "truncate_sigmas",
        )
        for name in positive:
            v = getattr(self, name)
            if not v > 0:
                raise InputError(f"invalid config: {name} ({v}) must be positive")
        if not self.tau_short < self.tau_long:
            raise InputError(
                f"invalid config: tau_short ({self.tau_short}) must be less than "
                f"tau_long ({self.tau_long})"
            )
        if self.grid_resolution < 8:
            raise InputError(f"invalid config: grid_resolution ({self.grid_resolution}) must be >= 8")
        if self.density_samples < 2:
            raise InputError(f"invalid config: density_samples ({self.density_samples}) must be >= 2")
        if self.subdivisions < 2:
            raise InputError(f"invalid config: subdivisions ({self.subdivisions}) must be >= 2")
        if not self.projection_min < self.projection_max:
            raise InputError(
                f"invalid config: projection_min ({self.projection_min}) must be less "
                f"than projection_max ({self.projection_max})"
            )
        if not self.margin_frac >= 0:
            raise InputError(f"invalid config: margin_frac ({self.margin_frac}) must be >= 0")
        for pair in self.exclusions:
            if len(pair) != 2:
                raise InputError(f"invalid config: exclusion entry {pair!r} must be [warehouse, region]")

    @property
    def exclusion_set(self) -> frozenset[tuple[str, str]]:
        return frozenset((str(w), str(r)) for w, r in self.exclusions)


@dataclass(frozen=True)
class SmoothingSchedule:
    """Interleaved smoothing plan: G, CR, G, CR, G, CR, G, then uniform resampling.

    gaussian_passes: (iterations, weight) per neighbor-averaging pass.
    spline_densities: samples per segment for each interpolation pass.
    """

    gaussian_passes: tuple[tuple[int, float], ...] = ((15, 0.55), (10, 0.45), (8, 0.35), (4, 0.25))
    spline_densities: tuple[int, ...] = (10, 8, 4)
    final_point_count: int = 100

    def validate(self) -> None:
        weights = [w for _, w in self.gaussian_passes]
        if any(not (0.0 < w < 1.0) for w in weights):
            raise InputError(f"invalid config: gaussian weights {weights} must lie in (0, 1)")
        if any(b >= a for a, b in zip(weights, weights[1:])):
            raise InputError(f"invalid config: gaussian weights {weights} must be strictly decreasing")
        if any(it < 1 for it, _ in self.gaussian_passes):
            raise InputError("invalid config: gaussian pass iteration counts must be >= 1")
        if any(d < 2 for d in self.spline_densities):
            raise InputError(f"invalid config: spline densities {list(self.spline_densities)} must be >= 2")
        if len(self.gaussian_passes) != len(self.spline_densities) + 1:
            raise InputError(
                "invalid config: smoothing interleave requires one more gaussian pass "
                "than spline passes"
            )
        if self.final_point_count < 2:
            raise InputError(f"invalid config: final_point_count ({self.final_point_count}) must be >= 2")


DEFAULT_HEX_RADII_KM: tuple[float, ...] = (10.0, 25.0, 50.0)


@dataclass(frozen=True)
class PipelineConfig:
    """Flat, JSON-serializable configuration for the whole scene pipeline."""

    bundle: BundleParams = field(default_factory=BundleParams)
    smoothing: SmoothingSchedule = field(default_factory=SmoothingSchedule)
    hex_radii_km: tuple[float, ...] = DEFAULT_HEX_RADII_KM
    warehouses_path: str | None = None
    regions_path: str | None = None

    def validate(self) -> None:
        self.bundle.validate()
        self.smoothing.validate()
        for r in self.hex_radii_km:
            if not r > 0:
                raise InputError(f"invalid config: hex radius ({r}) must be positive")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = dict(asdict(self.bundle))
        out["exclusions"] = [list(p) for p in self.bundle.exclusions]
        out["gaussian_passes"] = [list(p) for p in self.smoothing.gaussian_passes]
        out["spline_densities"] = list(self.smoothing.spline_densities)
        out["final_point_count"] = self.smoothing.final_point_count
        out["hex_radii_km"] = list(self.hex_radii_km)
        out["warehouses_path"] = self.warehouses_path
        out["regions_path"] = self.regions_path
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PipelineConfig":
        bundle_fields = {f for f in BundleParams.__dataclass_fields__}
        known = bundle_fields | {
            "gaussian_passes", "spline_densities", "final_point_count",
            "hex_radii_km", "warehouses_path", "regions_path",
        }
        unknown = set(data) - known
        if unknown:
            raise InputError(f"invalid config: unknown keys {sorted(unknown)}")

        bundle_kwargs: dict[str, Any] = {}
        for name in bundle_fields:
            if name in data:
                value = data[name]
                if name == "exclusions":
                    value = tuple((str(w), str(r)) for w, r in value)
                bundle_kwargs[name] = value
        smoothing_kwargs: dict[str, Any] = {}
        if "gaussian_passes" in data:
            smoothing_kwargs["gaussian_passes"] = tuple(
                (int(it), float(w)) for it, w in data["gaussian_passes"]
            )
        if "spline_densities" in data:
            smoothing_kwargs["spline_densities"] = tuple(int(d) for d in data["spline_densities"])
        if "final_point_count" in data:
            smoothing_kwargs["final_point_count"] = int(data["final_point_count"])

        cfg = cls(
            bundle=BundleParams(**bundle_kwargs),
            smoothing=SmoothingSchedule(**smoothing_kwargs),
            hex_radii_km=tuple(float(r) for r in data.get("hex_radii_km", DEFAULT_HEX_RADII_KM)),
            warehouses_path=data.get("warehouses_path"),
            regions_path=data.get("regions_path"),
        )
        cfg.validate()
        return cfg

    @classmethod
    def from_json_file(cls, path: str) -> "PipelineConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise InputError(f"config file {path} must contain a JSON object")
        return cls.from_dict(data)
