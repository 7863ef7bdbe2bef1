/** Canvas renderer: plain-graticule equirectangular map with three layers.
 *
 * Zoom follows web-map semantics: the world spans 256 * 2^z pixels of
 * longitude, so the mode thresholds (z = 6, z = 10) match familiar scales.
 */

import { geometryFor } from "./controls.js";
import type { CameraState } from "./camera.js";
import type { LayerOpacities } from "./transition.js";
import type { StyleMap, VisualParams } from "./selection.js";
import { categoryColor } from "./colors.js";
import type { HexLayer, SceneManifest, SunburstNode, WarehouseEntry } from "./types.js";

export function pixelsPerDegree(zoom: number): number {
  return (256 * Math.pow(2, zoom)) / 360;
}

export class Projection {
  private readonly scale: number;
  constructor(private readonly camera: CameraState,
              private readonly width: number,
              private readonly height: number) {
    this.scale = pixelsPerDegree(camera.zoom);
  }

  x(lon: number): number {
    return this.width / 2 + (lon - this.camera.center.lon) * this.scale;
  }

  y(lat: number): number {
    return this.height / 2 - (lat - this.camera.center.lat) * this.scale;
  }

  lon(x: number): number {
    return this.camera.center.lon + (x - this.width / 2) / this.scale;
  }

  lat(y: number): number {
    return this.camera.center.lat - (y - this.height / 2) / this.scale;
  }

  kmToPx(km: number, atLat: number): number {
    const degPerKm = 1 / (111.195 * Math.cos((atLat * Math.PI) / 180));
    return km * degPerKm * this.scale;
  }
}

export function drawGraticule(ctx: CanvasRenderingContext2D, proj: Projection,
                              width: number, height: number): void {
  ctx.save();
  ctx.strokeStyle = "#2c3440";
  ctx.lineWidth = 1;
  ctx.fillStyle = "#10151c";
  ctx.fillRect(0, 0, width, height);
  const lonStart = Math.floor(proj.lon(0) / 5) * 5;
  const lonEnd = Math.ceil(proj.lon(width) / 5) * 5;
  for (let lon = lonStart; lon <= lonEnd; lon += 5) {
    ctx.beginPath();
    ctx.moveTo(proj.x(lon), 0);
    ctx.lineTo(proj.x(lon), height);
    ctx.stroke();
  }
  const latStart = Math.floor(proj.lat(height) / 5) * 5;
  const latEnd = Math.ceil(proj.lat(0) / 5) * 5;
  for (let lat = latStart; lat <= latEnd; lat += 5) {
    ctx.beginPath();
    ctx.moveTo(0, proj.y(lat));
    ctx.lineTo(width, proj.y(lat));
    ctx.stroke();
  }
  ctx.restore();
}

export function drawFlows(ctx: CanvasRenderingContext2D, proj: Projection,
                          manifest: SceneManifest, styles: StyleMap,
                          params: VisualParams, layerOpacity: number): void {
  if (layerOpacity <= 0) return;
  ctx.save();
  ctx.lineCap = "round";
  ctx.lineJoin = "round";
  for (const flow of manifest.flows) {
    const style = styles.get(flow.id);
    if (!style) continue;
    const path = geometryFor(flow, params.bundlingOn);
    ctx.globalAlpha = style.opacity * layerOpacity;
    ctx.strokeStyle = style.color;
    ctx.lineWidth = style.width;
    ctx.beginPath();
    ctx.moveTo(proj.x(path[0][0]), proj.y(path[0][1]));
    for (let i = 1; i < path.length; i++) {
      ctx.lineTo(proj.x(path[i][0]), proj.y(path[i][1]));
    }
    ctx.stroke();
  }
  ctx.restore();
}

const HEX_ANGLES = [30, 90, 150, 210, 270, 330].map((a) => (a * Math.PI) / 180);

export function drawHexLayer(ctx: CanvasRenderingContext2D, proj: Projection,
                             layer: HexLayer, elevationScale: number,
                             layerOpacity: number): void {
  if (layerOpacity <= 0) return;
  ctx.save();
  const maxCount = Math.max(1, ...layer.bins.map((b) => b.count));
  for (const bin of layer.bins) {
    const cx = proj.x(bin.lon);
    const cy = proj.y(bin.lat);
    const r = proj.kmToPx(layer.radius_km, bin.lat);
    const intensity = Math.min(1, (bin.count / maxCount) * elevationScale);
    ctx.globalAlpha = layerOpacity * (0.25 + 0.65 * intensity);
    ctx.fillStyle = categoryColor(bin.dominant);
    ctx.beginPath();
    for (let i = 0; i < HEX_ANGLES.length; i++) {
      const px = cx + r * Math.cos(HEX_ANGLES[i]);
      const py = cy + r * Math.sin(HEX_ANGLES[i]);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    }
    ctx.closePath();
    ctx.fill();
  }
  ctx.restore();
}

export interface SunburstHit {
  path: string[];
  node: SunburstNode;
}

/** Draws three taxonomy rings around the warehouse; returns hit regions as
 * (ring, angle range) records for hover lookup. */
export function drawSunburst(ctx: CanvasRenderingContext2D, cx: number, cy: number,
                             radius: number, root: SunburstNode,
                             layerOpacity: number): Array<SunburstHit & {
                               r0: number; r1: number; a0: number; a1: number;
                             }> {
  if (layerOpacity <= 0) return [];
  const rings = 3;
  const r0 = radius * 0.25;
  const ringWidth = (radius - r0) / rings;
  const hits: Array<SunburstHit & { r0: number; r1: number; a0: number; a1: number }> = [];
  ctx.save();
  ctx.globalAlpha = layerOpacity;
  ctx.beginPath();
  ctx.fillStyle = "#1f2733";
  ctx.arc(cx, cy, r0 - 2, 0, Math.PI * 2);
  ctx.fill();

  const drawRing = (node: SunburstNode, path: string[], a0: number, a1: number) => {
    if (node.depth >= 1) {
      const inner = r0 + (node.depth - 1) * ringWidth;
      const outer = inner + ringWidth - 1;
      ctx.beginPath();
      ctx.arc(cx, cy, outer, a0, a1);
      ctx.arc(cx, cy, inner, a1, a0, true);
      ctx.closePath();
      const topLabel = path[0] ?? node.label;
      ctx.fillStyle = categoryColor(topLabel);
      ctx.globalAlpha = layerOpacity * (1 - 0.22 * (node.depth - 1));
      ctx.fill();
      ctx.strokeStyle = "#10151c";
      ctx.lineWidth = 1;
      ctx.stroke();
      hits.push({ path, node, r0: inner, r1: outer, a0, a1 });
    }
    if (!node.children.length) return;
    const span = a1 - a0;
    const total = node.children.reduce((acc, c) => acc + c.stock, 0);
    let angle = a0;
    for (const child of node.children) {
      const childSpan = total > 0 ? (span * child.stock) / total : 0;
      drawRing(child, node.depth === 0 ? [child.label] : [...path, child.label],
               angle, angle + childSpan);
      angle += childSpan;
    }
  };
  drawRing(root, [], -Math.PI / 2, Math.PI * 1.5);
  ctx.restore();
  return hits;
}

export function drawWarehouses(ctx: CanvasRenderingContext2D, proj: Projection,
                               warehouses: readonly WarehouseEntry[],
                               colors: (id: string) => string): void {
  ctx.save();
  for (const w of warehouses) {
    const x = proj.x(w.lon);
    const y = proj.y(w.lat);
    ctx.globalAlpha = 1;
    ctx.fillStyle = colors(w.id);
    ctx.strokeStyle = "#ffffff";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.arc(x, y, 6, 0, Math.PI * 2);
    ctx.fill();
    ctx.stroke();
    ctx.fillStyle = "#e8edf4";
    ctx.font = "11px sans-serif";
    ctx.fillText(w.id, x + 9, y + 4);
  }
  ctx.restore();
}

export interface FrameInput {
  manifest: SceneManifest;
  camera: CameraState;
  styles: StyleMap;
  params: VisualParams;
  opacities: LayerOpacities;
  hexRadius: number;
  sunburstWarehouse: string | null;
}

export function renderFrame(ctx: CanvasRenderingContext2D, width: number,
                            height: number, input: FrameInput) {
  const proj = new Projection(input.camera, width, height);
  drawGraticule(ctx, proj, width, height);
  drawFlows(ctx, proj, input.manifest, input.styles, input.params, input.opacities.macro);
  const layer = input.manifest.hex_layers.find((l) => l.radius_km === input.hexRadius)
    ?? input.manifest.hex_layers[0];
  if (layer) drawHexLayer(ctx, proj, layer, input.params.elevationScale, input.opacities.meso);
  const order = input.manifest.warehouses.map((w) => w.id);
  drawWarehouses(ctx, proj, input.manifest.warehouses, (id) => {
    const idx = Math.max(0, order.indexOf(id));
    return ["#e53935", "#1e88e5", "#43a047", "#fdd835"][idx % 4];
  });
  let sunburstHits: ReturnType<typeof drawSunburst> = [];
  if (input.sunburstWarehouse && input.opacities.micro > 0) {
    const root = input.manifest.sunbursts[input.sunburstWarehouse];
    if (root) {
      sunburstHits = drawSunburst(ctx, width / 2, height / 2,
                                  Math.min(width, height) * 0.33, root,
                                  input.opacities.micro);
    }
  }
  return { proj, sunburstHits };
}
