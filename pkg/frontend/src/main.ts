import { ViewerApp } from "./app.js";
import type { ViewMode } from "./modes.js";
import type { ColorMode } from "./selection.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

async function boot(): Promise<void> {
  const canvas = byId<HTMLCanvasElement>("map");
  const resize = () => {
    canvas.width = canvas.clientWidth;
    canvas.height = canvas.clientHeight;
  };
  window.addEventListener("resize", resize);
  resize();

  const app = new ViewerApp(
    canvas,
    byId("sidebar"),
    byId("tooltip"),
    byId("error-banner"),
  );

  byId<HTMLInputElement>("bundling-toggle").addEventListener("change", (ev) => {
    app.setParams({ bundlingOn: (ev.target as HTMLInputElement).checked });
  });
  byId<HTMLInputElement>("opacity-slider").addEventListener("input", (ev) => {
    app.setParams({ arcOpacity: Number((ev.target as HTMLInputElement).value) });
  });
  byId<HTMLInputElement>("stroke-slider").addEventListener("input", (ev) => {
    app.setParams({ strokeWidth: Number((ev.target as HTMLInputElement).value) });
  });
  byId<HTMLSelectElement>("color-mode").addEventListener("change", (ev) => {
    app.setParams({ colorMode: (ev.target as HTMLSelectElement).value as ColorMode });
  });
  byId<HTMLSelectElement>("hex-radius").addEventListener("change", (ev) => {
    app.setParams({ hexRadius: Number((ev.target as HTMLSelectElement).value) });
  });
  byId<HTMLSelectElement>("preset-select").addEventListener("change", (ev) => {
    void app.switchManifest((ev.target as HTMLSelectElement).value);
  });
  for (const mode of ["auto", "macro", "meso", "micro"]) {
    byId(`tab-${mode}`).addEventListener("click", () => {
      for (const other of ["auto", "macro", "meso", "micro"]) {
        byId(`tab-${other}`).classList.toggle("active", other === mode);
      }
      app.setModeOverride(mode === "auto" ? null : (mode as ViewMode));
    });
  }

  await app.start();
}

boot().catch((err) => {
  const banner = document.getElementById("error-banner");
  if (banner) {
    banner.hidden = false;
    banner.textContent = String(err);
  }
});
