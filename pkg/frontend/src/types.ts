/** Shapes of the scene manifest emitted by the pipeline CLI. */

export interface GeoPointLL {
  lon: number;
  lat: number;
}

export type FlowClass = "long" | "short" | "bypass" | "excluded";

export type LonLat = [number, number];

export interface FlowEntry {
  id: string;
  origin_warehouse: string;
  dest_region: string;
  order_count: number;
  total_value_usd: number;
  category_hist: Record<string, number>;
  length_km: number;
  class: FlowClass;
  straight_path: LonLat[];
  bundled_path: LonLat[];
}

export interface HexBinEntry {
  q: number;
  r: number;
  lon: number;
  lat: number;
  count: number;
  dominant: string;
  top_categories: [string, number][];
}

export interface HexLayer {
  radius_km: number;
  origin: GeoPointLL;
  bins: HexBinEntry[];
}

export interface SunburstNode {
  label: string;
  depth: number;
  stock: number;
  fraction: number;
  children: SunburstNode[];
}

export interface WarehouseEntry {
  id: string;
  name: string;
  lon: number;
  lat: number;
}

export interface PipelineReportInfo {
  class_counts: Record<string, number>;
  skeleton_point_count: number;
  mean_displacement_per_iteration: number[];
  wall_time_ms: number | null;
  grid: { bounds: [number, number, number, number]; resolution: number };
}

export interface SceneManifest {
  version: number;
  filter_tag: string;
  warehouses: WarehouseEntry[];
  flows: FlowEntry[];
  hex_layers: HexLayer[];
  sunbursts: Record<string, SunburstNode>;
  report: PipelineReportInfo;
}
