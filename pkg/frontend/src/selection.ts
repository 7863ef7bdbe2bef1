/** Flow selection styling: the selected corridor renders teal at double
 * stroke width while every other flow dims to 30% of the current arc opacity;
 * clearing restores the base styles exactly. */

import { categoryColor, dominantCategoryOfFlow, volumeColor, warehouseColor } from "./colors.js";
import type { FlowEntry, SceneManifest } from "./types.js";

export const SELECTION_TEAL = "#0d9488";
export const SELECTED_WIDTH_FACTOR = 2;
export const DIMMED_OPACITY_FACTOR = 0.3;

export type ColorMode = "warehouse" | "volume" | "category";

export interface VisualParams {
  bundlingOn: boolean;
  arcOpacity: number; // percent, 10..100
  strokeWidth: number; // px, 0.5..5
  colorMode: ColorMode;
  hexRadius: number; // km, one of the manifest's layer radii
  elevationScale: number;
}

export function defaultVisualParams(): VisualParams {
  return {
    bundlingOn: true,
    arcOpacity: 80,
    strokeWidth: 1.5,
    colorMode: "warehouse",
    hexRadius: 25,
    elevationScale: 1,
  };
}

export interface ArcStyle {
  color: string;
  width: number;
  opacity: number; // 0..1
}

export type StyleMap = Map<string, ArcStyle>;

export function baseStyles(manifest: SceneManifest, params: VisualParams): StyleMap {
  const order = manifest.warehouses.map((w) => w.id);
  const maxCount = Math.max(1, ...manifest.flows.map((f) => f.order_count));
  const opacity = params.arcOpacity / 100;
  const styles: StyleMap = new Map();
  for (const flow of manifest.flows) {
    let color: string;
    switch (params.colorMode) {
      case "warehouse":
        color = warehouseColor(flow.origin_warehouse, order);
        break;
      case "volume":
        color = volumeColor(flow.order_count, maxCount);
        break;
      case "category":
        color = categoryColor(dominantCategoryOfFlow(flow));
        break;
    }
    const width = params.strokeWidth * (0.5 + 0.9 * Math.sqrt(flow.order_count / maxCount));
    styles.set(flow.id, { color, width, opacity });
  }
  return styles;
}

/** Styles with one flow highlighted; unknown ids leave the map unchanged. */
export function applySelection(base: StyleMap, selectedId: string | null): StyleMap {
  if (selectedId === null || !base.has(selectedId)) {
    return cloneStyles(base);
  }
  const out: StyleMap = new Map();
  for (const [id, style] of base) {
    if (id === selectedId) {
      out.set(id, {
        color: SELECTION_TEAL,
        width: style.width * SELECTED_WIDTH_FACTOR,
        opacity: style.opacity,
      });
    } else {
      out.set(id, { ...style, opacity: style.opacity * DIMMED_OPACITY_FACTOR });
    }
  }
  return out;
}

export function cloneStyles(styles: StyleMap): StyleMap {
  const out: StyleMap = new Map();
  for (const [id, style] of styles) out.set(id, { ...style });
  return out;
}

export function stylesEqual(a: StyleMap, b: StyleMap): boolean {
  if (a.size !== b.size) return false;
  for (const [id, style] of a) {
    const other = b.get(id);
    if (!other) return false;
    if (other.color !== style.color || other.width !== style.width ||
        other.opacity !== style.opacity) {
      return false;
    }
  }
  return true;
}

export interface SidebarData {
  route: string;
  orderCount: number;
  totalValueUsd: number;
  lengthKm: number;
  categoryBars: [string, number][]; // label, fraction of orders, descending
}

export function sidebarFor(flow: FlowEntry): SidebarData {
  const total = Object.values(flow.category_hist).reduce((a, b) => a + b, 0);
  const bars = Object.entries(flow.category_hist)
    .sort((a, b) => b[1] - a[1] || (a[0] < b[0] ? -1 : 1))
    .map(([label, count]) => [label, total > 0 ? count / total : 0] as [string, number]);
  return {
    route: `${flow.origin_warehouse} → ${flow.dest_region}`,
    orderCount: flow.order_count,
    totalValueUsd: flow.total_value_usd,
    lengthKm: flow.length_km,
    categoryBars: bars,
  };
}
