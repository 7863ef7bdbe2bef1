/** DOM wiring: event handlers, the render loop, and state synchronization.
 * All heavy geometry is precomputed in the manifests; handlers only restyle
 * and redraw. */

import { CameraFlight, flyToWarehouse, type CameraState } from "./camera.js";
import { ManifestLoader, clampParams, geometryFor, hexLayerFor } from "./controls.js";
import { decodeHash, encodeHash } from "./hash.js";
import {
  effectiveMode,
  initialViewState,
  nearestWarehouseKm,
  resolveMode,
  type ViewMode,
  type ViewState,
} from "./modes.js";
import { Projection, renderFrame } from "./render.js";
import {
  applySelection,
  baseStyles,
  defaultVisualParams,
  sidebarFor,
  type StyleMap,
  type VisualParams,
} from "./selection.js";
import { hexTooltip, sunburstTooltip } from "./tooltip.js";
import { ModeCrossfade } from "./transition.js";
import type { SceneManifest } from "./types.js";

export class ViewerApp {
  private state: ViewState = initialViewState();
  private params: VisualParams = defaultVisualParams();
  private manifest: SceneManifest | null = null;
  private base: StyleMap = new Map();
  private styles: StyleMap = new Map();
  private crossfade: ModeCrossfade;
  private flight: CameraFlight | null = null;
  private loader = new ManifestLoader();
  private lastSunburst: string | null = null;
  private sunburstHits: ReturnType<typeof renderFrame>["sunburstHits"] = [];

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly sidebar: HTMLElement,
    private readonly tooltip: HTMLElement,
    private readonly errorBanner: HTMLElement,
  ) {
    Object.assign(this.state, decodeHash(location.hash));
    this.crossfade = new ModeCrossfade("macro", performance.now());
    this.bindPointerEvents();
  }

  async start(): Promise<void> {
    await this.switchManifest(this.state.activeManifest);
    const loop = () => {
      this.tick(performance.now());
      requestAnimationFrame(loop);
    };
    requestAnimationFrame(loop);
  }

  get camera(): CameraState {
    return { zoom: this.state.zoom, center: this.state.center };
  }

  async switchManifest(tag: string): Promise<void> {
    try {
      const manifest = await this.loader.load(tag);
      this.manifest = manifest;
      this.state.activeManifest = tag;
      this.restyle();
      this.errorBanner.hidden = true;
      this.syncHash();
    } catch (err) {
      if ((err as Error).name === "AbortError") return;
      this.errorBanner.textContent = `Could not load preset "${tag}": ${(err as Error).message}`;
      this.errorBanner.hidden = false;
    }
  }

  setParams(patch: Partial<VisualParams>): void {
    this.params = clampParams({ ...this.params, ...patch });
    this.restyle();
  }

  setModeOverride(mode: ViewMode | null): void {
    this.state.modeOverride = mode;
    this.syncHash();
  }

  selectFlow(id: string | null): void {
    if (!this.manifest) return;
    if (id !== null && !this.manifest.flows.some((f) => f.id === id)) return; // unknown: ignored
    this.state.selectedFlow = this.state.selectedFlow === id ? null : id;
    this.styles = applySelection(this.base, this.state.selectedFlow);
    this.renderSidebar();
  }

  flyTo(warehouseId: string): void {
    const w = this.manifest?.warehouses.find((x) => x.id === warehouseId);
    if (!w) return;
    this.flight = flyToWarehouse(this.camera, w, performance.now(), () => {
      this.flight = null;
      this.syncHash();
    });
  }

  private restyle(): void {
    if (!this.manifest) return;
    this.base = baseStyles(this.manifest, this.params);
    this.styles = applySelection(this.base, this.state.selectedFlow);
  }

  private renderSidebar(): void {
    if (!this.manifest || !this.state.selectedFlow) {
      this.sidebar.hidden = true;
      return;
    }
    const flow = this.manifest.flows.find((f) => f.id === this.state.selectedFlow);
    if (!flow) return;
    const data = sidebarFor(flow);
    const bars = data.categoryBars
      .map(([label, frac]) =>
        `<div class="bar-row"><span>${label}</span>` +
        `<div class="bar"><div style="width:${(frac * 100).toFixed(1)}%"></div></div>` +
        `<span>${(frac * 100).toFixed(0)}%</span></div>`)
      .join("");
    this.sidebar.innerHTML =
      `<h3>${data.route}</h3>` +
      `<p>${data.orderCount.toLocaleString()} orders &middot; ` +
      `$${Math.round(data.totalValueUsd).toLocaleString()} &middot; ` +
      `${Math.round(data.lengthKm).toLocaleString()} km</p>` + bars;
    this.sidebar.hidden = false;
  }

  private bindPointerEvents(): void {
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    this.canvas.addEventListener("pointerdown", (ev) => {
      dragging = true;
      lastX = ev.offsetX;
      lastY = ev.offsetY;
    });
    this.canvas.addEventListener("pointerup", (ev) => {
      dragging = false;
      if (Math.hypot(ev.offsetX - lastX, ev.offsetY - lastY) < 3) {
        this.handleClick(ev.offsetX, ev.offsetY);
      }
    });
    this.canvas.addEventListener("pointermove", (ev) => {
      if (dragging && ev.buttons) {
        const proj = this.projection();
        this.state.center = {
          lon: this.state.center.lon - (ev.offsetX - lastX) / this.pxPerDeg(),
          lat: this.state.center.lat + (ev.offsetY - lastY) / this.pxPerDeg(),
        };
        lastX = ev.offsetX;
        lastY = ev.offsetY;
        this.syncHash();
        void proj;
      } else {
        this.handleHover(ev.offsetX, ev.offsetY);
      }
    });
    this.canvas.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      this.state.zoom = Math.min(14, Math.max(2, this.state.zoom - ev.deltaY * 0.002));
      this.syncHash();
    }, { passive: false });
  }

  private pxPerDeg(): number {
    return (256 * Math.pow(2, this.state.zoom)) / 360;
  }

  private projection(): Projection {
    return new Projection(this.camera, this.canvas.width, this.canvas.height);
  }

  private handleClick(x: number, y: number): void {
    if (!this.manifest) return;
    const proj = this.projection();
    // warehouse markers take priority
    for (const w of this.manifest.warehouses) {
      if (Math.hypot(proj.x(w.lon) - x, proj.y(w.lat) - y) < 9) {
        this.flyTo(w.id);
        return;
      }
    }
    const mode = effectiveMode(this.state, this.manifest.warehouses);
    if (mode !== "macro") return;
    const hit = this.pickFlow(x, y, proj);
    this.selectFlow(hit);
  }

  private pickFlow(x: number, y: number, proj: Projection): string | null {
    if (!this.manifest) return null;
    let best: string | null = null;
    let bestDist = 6; // px tolerance
    for (const flow of this.manifest.flows) {
      const path = geometryFor(flow, this.params.bundlingOn);
      for (let i = 0; i < path.length; i += 4) {
        const d = Math.hypot(proj.x(path[i][0]) - x, proj.y(path[i][1]) - y);
        if (d < bestDist) {
          bestDist = d;
          best = flow.id;
        }
      }
    }
    return best;
  }

  private handleHover(x: number, y: number): void {
    if (!this.manifest) {
      this.tooltip.hidden = true;
      return;
    }
    const mode = effectiveMode(this.state, this.manifest.warehouses);
    if (mode === "micro" && this.sunburstHits.length) {
      const dx = x - this.canvas.width / 2;
      const dy = y - this.canvas.height / 2;
      const r = Math.hypot(dx, dy);
      let angle = Math.atan2(dy, dx);
      if (angle < -Math.PI / 2) angle += Math.PI * 2;
      const hit = this.sunburstHits.find(
        (h) => r >= h.r0 && r <= h.r1 && angle >= h.a0 && angle <= h.a1);
      if (hit) {
        this.showTooltip(x, y, sunburstTooltip(hit.node));
        return;
      }
    }
    if (mode === "meso") {
      const proj = this.projection();
      const layer = hexLayerFor(this.manifest, this.params.hexRadius);
      for (const bin of layer.bins) {
        const r = proj.kmToPx(layer.radius_km, bin.lat);
        if (Math.hypot(proj.x(bin.lon) - x, proj.y(bin.lat) - y) <= r) {
          this.showTooltip(x, y, hexTooltip(bin));
          return;
        }
      }
    }
    this.tooltip.hidden = true;
  }

  private showTooltip(x: number, y: number, text: string): void {
    this.tooltip.textContent = text;
    this.tooltip.style.left = `${x + 12}px`;
    this.tooltip.style.top = `${y + 12}px`;
    this.tooltip.hidden = false;
  }

  private syncHash(): void {
    history.replaceState(null, "", encodeHash(this.state));
  }

  tick(now: number): void {
    if (!this.manifest) return;
    if (this.flight) {
      const cam = this.flight.at(now);
      this.state.zoom = cam.zoom;
      this.state.center = cam.center;
    }
    const mode = effectiveMode(this.state, this.manifest.warehouses);
    this.crossfade.setMode(mode, now);
    const opacities = this.crossfade.step(now);

    let sunburstWarehouse: string | null = null;
    if (mode === "micro" || opacities.micro > 0) {
      let best: string | null = this.lastSunburst;
      let bestDist = Infinity;
      for (const w of this.manifest.warehouses) {
        const d = nearestWarehouseKm(this.state.center, [w]);
        if (d < bestDist) {
          bestDist = d;
          best = w.id;
        }
      }
      if (mode === "micro") this.lastSunburst = best;
      sunburstWarehouse = mode === "micro" ? best : this.lastSunburst;
    }

    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { sunburstHits } = renderFrame(ctx, this.canvas.width, this.canvas.height, {
      manifest: this.manifest,
      camera: this.camera,
      styles: this.styles,
      params: this.params,
      opacities,
      hexRadius: this.params.hexRadius,
      sunburstWarehouse,
    });
    this.sunburstHits = sunburstHits;
    const modeLabel = document.getElementById("mode-label");
    if (modeLabel) {
      modeLabel.textContent =
        `${mode} | z=${this.state.zoom.toFixed(1)} | ${resolveMode(
          this.state.zoom, this.state.center, this.manifest.warehouses,
          this.state.proximityKm)} by zoom`;
    }
  }
}
