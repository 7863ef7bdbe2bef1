/** Shareable view state in the URL hash:
 *  #z=4.50&lon=-96.000&lat=38.500&tag=all[&mode=meso]
 */

import type { ViewMode, ViewState } from "./modes.js";
import { initialViewState } from "./modes.js";

const MODES: ViewMode[] = ["macro", "meso", "micro"];

export function encodeHash(state: ViewState): string {
  const parts = [
    `z=${state.zoom.toFixed(2)}`,
    `lon=${state.center.lon.toFixed(3)}`,
    `lat=${state.center.lat.toFixed(3)}`,
    `tag=${encodeURIComponent(state.activeManifest)}`,
  ];
  if (state.modeOverride) parts.push(`mode=${state.modeOverride}`);
  return "#" + parts.join("&");
}

export function decodeHash(hash: string): Partial<ViewState> {
  const out: Partial<ViewState> = {};
  const body = hash.startsWith("#") ? hash.slice(1) : hash;
  if (!body) return out;
  const params = new URLSearchParams(body);
  const z = Number(params.get("z"));
  const lon = Number(params.get("lon"));
  const lat = Number(params.get("lat"));
  if (Number.isFinite(z)) out.zoom = z;
  if (Number.isFinite(lon) && Number.isFinite(lat) && params.has("lon") && params.has("lat")) {
    out.center = { lon, lat };
  }
  const tag = params.get("tag");
  if (tag) out.activeManifest = tag;
  const mode = params.get("mode");
  if (mode && (MODES as string[]).includes(mode)) out.modeOverride = mode as ViewMode;
  return out;
}

export function stateFromHash(hash: string): ViewState {
  return { ...initialViewState(), ...decodeHash(hash) };
}
