import { describe, expect, it } from "vitest";

import { CameraFlight, FLY_TO_ZOOM, flyToWarehouse } from "../src/camera.js";
import {
  ManifestLoader,
  clampParams,
  geometryFor,
  hexLayerFor,
  manifestUrl,
} from "../src/controls.js";
import { resolveMode } from "../src/modes.js";
import { applySelection, baseStyles, defaultVisualParams } from "../src/selection.js";
import { WAREHOUSES, syntheticManifest } from "./helpers.js";

describe("control bar", () => {
  const manifest = syntheticManifest(202);
  const params = defaultVisualParams();

  it("visual parameter ranges are enforced", () => {
    const clamped = clampParams({ ...params, arcOpacity: 250, strokeWidth: 0.01 });
    expect(clamped.arcOpacity).toBe(100);
    expect(clamped.strokeWidth).toBe(0.5);
    const low = clampParams({ ...params, arcOpacity: 3, strokeWidth: 9 });
    expect(low.arcOpacity).toBe(10);
    expect(low.strokeWidth).toBe(5);
  });

  it("bundling toggle swaps precomputed geometry without recomputation", () => {
    const flow = manifest.flows[0];
    expect(geometryFor(flow, true)).toBe(flow.bundled_path);
    expect(geometryFor(flow, false)).toBe(flow.straight_path);
  });

  it("full restyle of a 202-flow scene stays inside the 50 ms budget", () => {
    const start = performance.now();
    const base = baseStyles(manifest, { ...params, strokeWidth: 5 });
    applySelection(base, manifest.flows[42].id);
    const elapsed = performance.now() - start;
    expect(base.size).toBe(202);
    expect(elapsed).toBeLessThan(50);
  });

  it("bundling toggle restyle is within the 50 ms interaction budget", () => {
    const start = performance.now();
    for (const flow of manifest.flows) {
      geometryFor(flow, false);
    }
    baseStyles(manifest, { ...params, bundlingOn: false });
    expect(performance.now() - start).toBeLessThan(50);
  });

  it("hex layer lookup honors the selected radius", () => {
    expect(hexLayerFor(manifest, 25).radius_km).toBe(25);
    expect(hexLayerFor(manifest, 999).radius_km).toBe(10); // falls back to first
  });

  it("manifest URLs follow the static scenes/<tag>.json layout", () => {
    expect(manifestUrl("all")).toBe("scenes/all.json");
    expect(manifestUrl("WH-CA")).toBe("scenes/WH-CA.json");
  });

  it("preset switching aborts the in-flight fetch", async () => {
    const seen: string[] = [];
    const never = new Promise<Response>(() => undefined);
    const fetcher = ((url: string, init?: RequestInit) => {
      seen.push(url as string);
      if (seen.length === 1) {
        return new Promise<Response>((_, reject) => {
          init?.signal?.addEventListener("abort", () =>
            reject(new DOMException("aborted", "AbortError")));
        });
      }
      return Promise.resolve(new Response(JSON.stringify(syntheticManifest(4))));
    }) as typeof fetch;
    const loader = new ManifestLoader(fetcher);
    const first = loader.load("all");
    const second = loader.load("WH-CA");
    await expect(first).rejects.toThrow();
    await expect(second).resolves.toMatchObject({ version: 1 });
    expect(seen).toEqual(["scenes/all.json", "scenes/WH-CA.json"]);
    void never;
  });

  it("failed preset load raises a user-visible error", async () => {
    const fetcher = (() => Promise.resolve(new Response("x", { status: 404 }))) as typeof fetch;
    const loader = new ManifestLoader(fetcher);
    await expect(loader.load("WH-XX")).rejects.toThrow(/WH-XX/);
  });
});

describe("warehouse fly-to", () => {
  it("lands exactly at zoom 11 over the warehouse and completes once", () => {
    let completions = 0;
    const flight = flyToWarehouse(
      { zoom: 4, center: { lon: -96, lat: 38 } }, WAREHOUSES[0], 0, () => completions++);
    const end = flight.at(1200);
    expect(end.zoom).toBe(FLY_TO_ZOOM);
    expect(end.center).toEqual({ lon: WAREHOUSES[0].lon, lat: WAREHOUSES[0].lat });
    flight.at(1300);
    expect(completions).toBe(1);
  });

  it("an already-at-target flight still emits completion", () => {
    let done = false;
    const target = { zoom: FLY_TO_ZOOM, center: { lon: WAREHOUSES[1].lon, lat: WAREHOUSES[1].lat } };
    const flight = new CameraFlight(target, target, 0, 1200, (t) => t, () => { done = true; });
    flight.at(1200);
    expect(done).toBe(true);
  });

  it("modes transition along the animated path per the zoom rule", () => {
    const flight = flyToWarehouse(
      { zoom: 4, center: { lon: -96, lat: 38 } }, WAREHOUSES[0], 0);
    const modes: string[] = [];
    for (let t = 0; t <= 1200; t += 60) {
      const cam = flight.at(t);
      modes.push(resolveMode(cam.zoom, cam.center, WAREHOUSES));
    }
    expect(modes[0]).toBe("macro");
    expect(modes[modes.length - 1]).toBe("micro");
    expect(modes).toContain("meso");
    // once past a threshold the sweep never falls back (zoom is monotone)
    const first = { meso: modes.indexOf("meso"), micro: modes.indexOf("micro") };
    expect(first.meso).toBeGreaterThan(0);
    expect(first.micro).toBeGreaterThan(first.meso);
  });
});
