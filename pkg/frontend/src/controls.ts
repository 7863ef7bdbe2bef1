/** Control-bar behavior: parameter clamping, geometry toggling, manifest
 * preset switching. Restyles operate on precomputed geometry only; nothing
 * here recomputes bundles. */

import type { VisualParams } from "./selection.js";
import type { FlowEntry, LonLat, SceneManifest } from "./types.js";

export const ARC_OPACITY_RANGE: [number, number] = [10, 100];
export const STROKE_WIDTH_RANGE: [number, number] = [0.5, 5];

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, v));
}

export function clampParams(params: VisualParams): VisualParams {
  return {
    ...params,
    arcOpacity: clamp(params.arcOpacity, ...ARC_OPACITY_RANGE),
    strokeWidth: clamp(params.strokeWidth, ...STROKE_WIDTH_RANGE),
    elevationScale: Math.max(0.01, params.elevationScale),
  };
}

/** The bundling toggle swaps between the two precomputed path arrays; the
 * returned array is the manifest's own object, so no geometry is rebuilt. */
export function geometryFor(flow: FlowEntry, bundlingOn: boolean): LonLat[] {
  return bundlingOn ? flow.bundled_path : flow.straight_path;
}

export function manifestUrl(tag: string): string {
  return `scenes/${encodeURIComponent(tag)}.json`;
}

export function availableHexRadii(manifest: SceneManifest): number[] {
  return manifest.hex_layers.map((layer) => layer.radius_km);
}

export function hexLayerFor(manifest: SceneManifest, radiusKm: number) {
  return manifest.hex_layers.find((layer) => layer.radius_km === radiusKm) ??
    manifest.hex_layers[0];
}

/** Loads preset manifests with cancellation: switching presets aborts the
 * in-flight fetch so a slow response can never clobber a newer choice. */
export class ManifestLoader {
  private controller: AbortController | null = null;
  private readonly fetcher: typeof fetch;

  constructor(fetcher: typeof fetch = fetch) {
    this.fetcher = fetcher;
  }

  async load(tag: string): Promise<SceneManifest> {
    this.controller?.abort();
    this.controller = new AbortController();
    const response = await this.fetcher(manifestUrl(tag), {
      signal: this.controller.signal,
    });
    if (!response.ok) {
      throw new Error(`manifest ${tag} failed to load (HTTP ${response.status})`);
    }
    return (await response.json()) as SceneManifest;
  }
}
