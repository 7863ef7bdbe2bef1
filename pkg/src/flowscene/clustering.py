"""Directional flow clustering and the progressive cohesion force.

Flows are partitioned by (source warehouse, 45-degree bearing sector). During
bundling, long flows in a cluster are pulled toward the cluster's mean
polyline with strength ramping linearly up to ``cohesion_max``; shorter flows
only get light neighbor averaging so their natural paths survive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import BundleParams
from .errors import InputError
from .geo import bearing_deg
from .ingest import FlowEdge
from . import kernels
from .kernels import CLS_BYPASS, CLS_EXCLUDED, CLS_LONG, CLS_SHORT


def sector_index(bearing: float) -> int:
    """Half-open 45-degree bins: [0,45) -> 0, ..., [315,360) -> 7."""
    if not 0.0 <= bearing < 360.0:
        raise InputError(f"bearing {bearing} outside [0, 360)")
    return int(bearing // 45.0)


@dataclass
class DirectionalCluster:
    warehouse_id: str
    sector: int
    members: list[int] = field(default_factory=list)

    def centroid_polyline(self, points: np.ndarray) -> np.ndarray:
        """Mean of member polylines, per control index; points is (E, k+1, 2)."""
        return points[self.members].mean(axis=0)


def build_clusters(flows: list[FlowEdge]) -> list[DirectionalCluster]:
    """Partition flows by (warehouse, sector); every flow lands in exactly one
    cluster, singletons included."""
    by_key: dict[tuple[str, int], DirectionalCluster] = {}
    for idx, flow in enumerate(flows):
        sector = sector_index(bearing_deg(flow.origin_location, flow.dest_centroid))
        key = (flow.origin_warehouse, sector)
        cluster = by_key.get(key)
        if cluster is None:
            cluster = DirectionalCluster(flow.origin_warehouse, sector)
            by_key[key] = cluster
        cluster.members.append(idx)
    return [by_key[k] for k in sorted(by_key)]


def cluster_id_array(clusters: list[DirectionalCluster], n_flows: int) -> np.ndarray:
    ids = np.full(n_flows, -1, dtype=np.int64)
    for cid, cluster in enumerate(clusters):
        for m in cluster.members:
            ids[m] = cid
    if np.any(ids < 0):
        raise InputError("clusters do not cover all flows")
    return ids


def cohesion_strength(t: int, total: int, cohesion_max: float) -> float:
    """Linear ramp 0 -> cohesion_max over the iteration schedule."""
    if not 1 <= t <= total:
        raise InputError(f"iteration {t} outside 1..{total}")
    return cohesion_max * t / total


def cohesion_step(
    points: np.ndarray,
    flow_classes: np.ndarray,
    cluster_ids: np.ndarray,
    t: int,
    total_iterations: int,
    params: BundleParams,
) -> np.ndarray:
    """One synchronous cohesion update; endpoints never move.

    points is (E, k+1, 2); all polylines must share a control count (enforced
    by the array shape). Updates read pre-step positions and the pre-step
    cluster centroids only, so results do not depend on evaluation order.
    """
    if points.ndim != 3 or points.shape[2] != 2:
        raise InputError("points must be an (edges, controls, 2) array")
    c_long = cohesion_strength(t, total_iterations, params.cohesion_max)
    n_clusters = int(cluster_ids.max()) + 1 if cluster_ids.size else 0
    return kernels.cohesion_pass(
        np.ascontiguousarray(points, dtype=np.float64),
        np.ascontiguousarray(flow_classes, dtype=np.int8),
        np.ascontiguousarray(cluster_ids, dtype=np.int64),
        n_clusters,
        c_long,
        params.neighbor_weight,
    )


def polylines_to_array(polylines: list[np.ndarray]) -> np.ndarray:
    counts = {p.shape[0] for p in polylines}
    if len(counts) > 1:
        raise InputError(f"mismatched control counts: {sorted(counts)}")
    return np.stack([np.asarray(p, dtype=np.float64) for p in polylines])
