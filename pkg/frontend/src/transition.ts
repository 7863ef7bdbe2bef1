/** Opacity cross-fades between semantic levels.
 *
 * Each layer fades independently over TRANSITION_MS: the outgoing layer
 * animates to 0, the incoming to 1; the camera is untouched. Retargeting
 * mid-flight restarts each layer's fade from its current opacity, so an
 * interrupted transition never jumps.
 */

import type { ViewMode } from "./modes.js";

export const TRANSITION_MS = 400;

export type Easing = (t: number) => number;

export const easeInOutCubic: Easing = (t) =>
  t < 0.5 ? 4 * t * t * t : 1 - Math.pow(-2 * t + 2, 3) / 2;

export const LAYERS: readonly ViewMode[] = ["macro", "meso", "micro"];

export type LayerOpacities = Record<ViewMode, number>;

interface Fade {
  from: number;
  to: number;
  start: number;
}

export class ModeCrossfade {
  private fades: Record<ViewMode, Fade>;
  private current: LayerOpacities;
  private readonly easing: Easing;
  private readonly duration: number;

  constructor(initialMode: ViewMode, now: number, easing: Easing = easeInOutCubic,
              duration: number = TRANSITION_MS) {
    this.easing = easing;
    this.duration = duration;
    this.current = { macro: 0, meso: 0, micro: 0 };
    this.current[initialMode] = 1;
    this.fades = {
      macro: { from: this.current.macro, to: this.current.macro, start: now },
      meso: { from: this.current.meso, to: this.current.meso, start: now },
      micro: { from: this.current.micro, to: this.current.micro, start: now },
    };
  }

  /** Begin (or retarget) the fade toward `mode`. A no-op if already heading there. */
  setMode(mode: ViewMode, now: number): void {
    for (const layer of LAYERS) {
      const target = layer === mode ? 1 : 0;
      const fade = this.fades[layer];
      if (fade.to === target) continue;
      this.fades[layer] = { from: this.current[layer], to: target, start: now };
    }
  }

  /** Advance to `now` and return the layer opacities (all within [0, 1]). */
  step(now: number): LayerOpacities {
    for (const layer of LAYERS) {
      const fade = this.fades[layer];
      const t = Math.min(1, Math.max(0, (now - fade.start) / this.duration));
      const value = fade.from + (fade.to - fade.from) * this.easing(t);
      this.current[layer] = Math.min(1, Math.max(0, value));
    }
    return { ...this.current };
  }

  isSettled(now: number): boolean {
    return LAYERS.every(
      (layer) => now - this.fades[layer].start >= this.duration ||
        this.fades[layer].from === this.fades[layer].to,
    );
  }

  opacities(): LayerOpacities {
    return { ...this.current };
  }
}
