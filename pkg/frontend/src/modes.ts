/** Zoom-driven view mode resolution.
 *
 * Thresholds: macro below zoom 6; micro at zoom >= 10 when the map center is
 * within the proximity radius of a warehouse; meso everywhere else (including
 * far-from-warehouse views at high zoom, which keeps the function total).
 * A manual override always wins until cleared.
 */

import type { GeoPointLL, WarehouseEntry } from "./types.js";

export type ViewMode = "macro" | "meso" | "micro";

export const MESO_MIN_ZOOM = 6;
export const MICRO_MIN_ZOOM = 10;
export const DEFAULT_PROXIMITY_KM = 50;

const EARTH_RADIUS_KM = 6371;

export function haversineKm(a: GeoPointLL, b: GeoPointLL): number {
  const rad = Math.PI / 180;
  const la1 = a.lat * rad;
  const la2 = b.lat * rad;
  const dLat = (b.lat - a.lat) * rad;
  const dLon = (b.lon - a.lon) * rad;
  const h =
    Math.sin(dLat / 2) ** 2 +
    Math.cos(la1) * Math.cos(la2) * Math.sin(dLon / 2) ** 2;
  return 2 * EARTH_RADIUS_KM * Math.asin(Math.min(1, Math.sqrt(h)));
}

export function nearestWarehouseKm(
  center: GeoPointLL,
  warehouses: readonly WarehouseEntry[],
): number {
  let best = Infinity;
  for (const w of warehouses) {
    const d = haversineKm(center, { lon: w.lon, lat: w.lat });
    if (d < best) best = d;
  }
  return best;
}

export function resolveMode(
  zoom: number,
  center: GeoPointLL,
  warehouses: readonly WarehouseEntry[],
  proximityKm: number = DEFAULT_PROXIMITY_KM,
): ViewMode {
  if (zoom < MESO_MIN_ZOOM) return "macro";
  if (zoom >= MICRO_MIN_ZOOM && nearestWarehouseKm(center, warehouses) <= proximityKm) {
    return "micro";
  }
  return "meso";
}

export interface ViewState {
  zoom: number;
  center: GeoPointLL;
  modeOverride: ViewMode | null;
  selectedFlow: string | null;
  activeManifest: string;
  proximityKm: number;
}

export function initialViewState(): ViewState {
  return {
    zoom: 4,
    center: { lon: -96.0, lat: 38.5 },
    modeOverride: null,
    selectedFlow: null,
    activeManifest: "all",
    proximityKm: DEFAULT_PROXIMITY_KM,
  };
}

export function effectiveMode(
  state: ViewState,
  warehouses: readonly WarehouseEntry[],
): ViewMode {
  if (state.modeOverride) return state.modeOverride;
  return resolveMode(state.zoom, state.center, warehouses, state.proximityKm);
}
