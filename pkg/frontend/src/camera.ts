/** Eased camera animation for the warehouse fly-to interaction. */

import { easeInOutCubic, type Easing } from "./transition.js";
import type { GeoPointLL, WarehouseEntry } from "./types.js";

export const FLY_TO_ZOOM = 11;
export const FLY_TO_MS = 1200;

export interface CameraState {
  zoom: number;
  center: GeoPointLL;
}

export class CameraFlight {
  readonly from: CameraState;
  readonly to: CameraState;
  private readonly start: number;
  private readonly duration: number;
  private readonly easing: Easing;
  private completed = false;
  private readonly onComplete?: () => void;

  constructor(from: CameraState, to: CameraState, start: number,
              duration: number = FLY_TO_MS, easing: Easing = easeInOutCubic,
              onComplete?: () => void) {
    this.from = { zoom: from.zoom, center: { ...from.center } };
    this.to = { zoom: to.zoom, center: { ...to.center } };
    this.start = start;
    this.duration = duration;
    this.easing = easing;
    this.onComplete = onComplete;
  }

  at(now: number): CameraState {
    const t = Math.min(1, Math.max(0, (now - this.start) / this.duration));
    const k = this.easing(t);
    const state = {
      zoom: this.from.zoom + (this.to.zoom - this.from.zoom) * k,
      center: {
        lon: this.from.center.lon + (this.to.center.lon - this.from.center.lon) * k,
        lat: this.from.center.lat + (this.to.center.lat - this.from.center.lat) * k,
      },
    };
    if (t >= 1) {
      // exact arrival, and completion fires exactly once even for a zero-length flight
      state.zoom = this.to.zoom;
      state.center = { ...this.to.center };
      if (!this.completed) {
        this.completed = true;
        this.onComplete?.();
      }
    }
    return state;
  }

  done(now: number): boolean {
    return now - this.start >= this.duration;
  }
}

export function flyToWarehouse(current: CameraState, warehouse: WarehouseEntry,
                               now: number, onComplete?: () => void): CameraFlight {
  return new CameraFlight(
    current,
    { zoom: FLY_TO_ZOOM, center: { lon: warehouse.lon, lat: warehouse.lat } },
    now, FLY_TO_MS, easeInOutCubic, onComplete,
  );
}
