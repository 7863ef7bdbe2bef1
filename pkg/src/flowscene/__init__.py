"""Origin-destination flow bundling and multi-scale map scene compilation.

Core pieces: ingestion of order/inventory feeds into warehouse-to-region
flows, skeleton-driven edge bundling with directional and detour constraints,
hexagonal density aggregation, per-warehouse inventory hierarchies, and a CLI
that compiles everything into self-contained viewer manifests.
"""

from .bundling import (
    ControlPolyline,
    DensityField,
    DistanceField,
    PipelineReport,
    SkeletonPoint,
    attract_iteration,
    build_density_field,
    bundle,
    compute_edt,
    detour_ratio,
    extract_skeleton,
    passes_checks,
    render_excluded_arc,
)
from .clustering import DirectionalCluster, build_clusters, cohesion_step, sector_index
from .config import BundleParams, PipelineConfig, SmoothingSchedule
from .errors import FlowSceneError, InputError, ParseError, PipelineError
from .geo import GeoPoint, GridMapping, bearing_deg, haversine_km
from .hexbin import HexBin, HexGridSpec, hex_assign, hex_binning, top_k_categories
from .ingest import (
    ExclusionReport,
    FlowEdge,
    InventoryRecord,
    OrderRecord,
    Warehouse,
    aggregate_flows,
    assign_nearest_warehouse,
    parse_inventory,
    parse_orders,
)
from .inventory import SunburstNode, build_hierarchy, share_of_category
from .kernels import BACKEND
from .smoothing import catmull_rom_pass, gaussian_pass, resample_uniform, smooth_pipeline

__version__ = "0.1.0"
