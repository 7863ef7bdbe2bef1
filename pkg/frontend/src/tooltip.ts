/** Hover feedback content for hex bins and sunburst segments. */

import type { HexBinEntry, SunburstNode } from "./types.js";

export const TOP_K = 5;

export function hexTooltip(bin: HexBinEntry): string {
  const cats = bin.top_categories
    .slice(0, TOP_K)
    .map(([label, count]) => `${label} (${count})`)
    .join(", ");
  const noun = bin.count === 1 ? "order" : "orders";
  return `${bin.count} ${noun}; ${cats}`;
}

export function sunburstTooltip(node: SunburstNode): string {
  const pct = (node.fraction * 100).toFixed(node.fraction >= 0.1 ? 0 : 1);
  const noun = node.stock === 1 ? "unit" : "units";
  return `${node.label}: ${node.stock} ${noun} (${pct}% of warehouse stock)`;
}

/** Depth-first hit lookup used by the sunburst hover handler. */
export function findSegment(
  root: SunburstNode,
  path: readonly string[],
): SunburstNode | null {
  let node = root;
  for (const label of path) {
    const child = node.children.find((c) => c.label === label);
    if (!child) return null;
    node = child;
  }
  return node;
}
