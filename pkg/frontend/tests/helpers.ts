import type { FlowEntry, LonLat, SceneManifest, SunburstNode } from "../src/types.js";

export const WAREHOUSES = [
  { id: "WH-CA", name: "California", lon: -118.25, lat: 34.05 },
  { id: "WH-NJ", name: "New Jersey", lon: -74.4, lat: 40.52 },
  { id: "WH-TX", name: "Texas", lon: -96.8, lat: 32.78 },
  { id: "WH-IL", name: "Illinois", lon: -87.63, lat: 41.88 },
];

function path(n: number, x0: number, y0: number, x1: number, y1: number): LonLat[] {
  const out: LonLat[] = [];
  for (let i = 0; i < n; i++) {
    const t = i / (n - 1);
    out.push([x0 + (x1 - x0) * t, y0 + (y1 - y0) * t]);
  }
  return out;
}

export function syntheticFlow(i: number): FlowEntry {
  const w = WAREHOUSES[i % WAREHOUSES.length];
  const destLon = -70 - (i % 40);
  const destLat = 28 + (i % 20);
  return {
    id: `${w.id}:R${i}`,
    origin_warehouse: w.id,
    dest_region: `R${i}`,
    order_count: 1 + ((i * 37) % 900),
    total_value_usd: 1000 + i,
    category_hist: { Electronics: 1 + (i % 5), Apparel: 1 + (i % 3), "Home & Garden": 1 },
    length_km: 600 + i,
    class: "long",
    straight_path: path(65, w.lon, w.lat, destLon, destLat),
    bundled_path: path(100, w.lon, w.lat, destLon, destLat),
  };
}

export function sunburst(): SunburstNode {
  const leaf = (label: string, stock: number, fraction: number): SunburstNode => ({
    label, depth: 3, stock, fraction, children: [],
  });
  return {
    label: "WH-CA",
    depth: 0,
    stock: 100,
    fraction: 1,
    children: [
      {
        label: "Electronics", depth: 1, stock: 62, fraction: 0.62,
        children: [{
          label: "Computers", depth: 2, stock: 62, fraction: 0.62,
          children: [leaf("Laptops", 40, 0.4), leaf("Monitors", 22, 0.22)],
        }],
      },
      {
        label: "Apparel", depth: 1, stock: 38, fraction: 0.38,
        children: [{
          label: "Men", depth: 2, stock: 38, fraction: 0.38,
          children: [leaf("Shirts", 38, 0.38)],
        }],
      },
    ],
  };
}

export function syntheticManifest(flowCount = 202): SceneManifest {
  const flows = Array.from({ length: flowCount }, (_, i) => syntheticFlow(i));
  return {
    version: 1,
    filter_tag: "all",
    warehouses: WAREHOUSES,
    flows,
    hex_layers: [10, 25, 50].map((radius) => ({
      radius_km: radius,
      origin: { lon: -96, lat: 38 },
      bins: [
        { q: 0, r: 0, lon: -96, lat: 38, count: 4, dominant: "Apparel",
          top_categories: [["Apparel", 3], ["Electronics", 1]] },
        { q: 1, r: 0, lon: -95.5, lat: 38, count: 1, dominant: "Electronics",
          top_categories: [["Electronics", 1]] },
      ],
    })),
    sunbursts: { "WH-CA": sunburst() },
    report: {
      class_counts: { long: flowCount, short: 0, bypass: 0, excluded: 0 },
      skeleton_point_count: 42,
      mean_displacement_per_iteration: [0.5, 0.4],
      wall_time_ms: null,
      grid: { bounds: [-125, 24, -66, 50], resolution: 128 },
    },
  };
}
