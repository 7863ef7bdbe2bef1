/** Color assignments shared by arcs, hexes, and legends. */

import type { FlowEntry } from "./types.js";

/** Fixed legend hues for the headline categories. */
export const CATEGORY_COLORS: Record<string, string> = {
  "Home & Garden": "#2e7d32", // green
  Apparel: "#c62828", // red
  Electronics: "#1565c0", // blue
  Sports: "#ef6c00",
  Toys: "#6a1b9a",
  Office: "#00838f",
};

export const FALLBACK_CATEGORY_COLOR = "#607d8b";

export const WAREHOUSE_PALETTE = [
  "#e53935", "#1e88e5", "#43a047", "#fdd835", "#8e24aa", "#00acc1",
];

export function categoryColor(label: string): string {
  return CATEGORY_COLORS[label] ?? FALLBACK_CATEGORY_COLOR;
}

export function warehouseColor(id: string, order: readonly string[]): string {
  const idx = Math.max(0, order.indexOf(id));
  return WAREHOUSE_PALETTE[idx % WAREHOUSE_PALETTE.length];
}

/** Volume ramp: light amber to deep red on a log scale. */
export function volumeColor(count: number, maxCount: number): string {
  const t = maxCount > 1 ? Math.log(1 + count) / Math.log(1 + maxCount) : 1;
  const r = Math.round(255 - 90 * t);
  const g = Math.round(200 - 170 * t);
  const b = Math.round(80 - 50 * t);
  return `rgb(${r},${g},${b})`;
}

export function dominantCategoryOfFlow(flow: FlowEntry): string {
  let best = "";
  let bestCount = -1;
  for (const [label, count] of Object.entries(flow.category_hist)) {
    if (count > bestCount || (count === bestCount && label < best)) {
      best = label;
      bestCount = count;
    }
  }
  return best;
}
