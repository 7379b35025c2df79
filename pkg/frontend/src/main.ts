/** Page bootstrap: file uploads, service calls, re-rendering on changes. */

import { render, renderError } from "./render.js";
import { createState, loadBundle, toggleMetric } from "./state.js";
import { BundleError, MetricName } from "./types.js";

const state = createState();

function root(): HTMLElement {
  const el = document.getElementById("viewer-root");
  if (!el) throw new Error("viewer root element missing");
  return el;
}

function redraw(): void {
  render(root(), state, {
    onToggleMetric: (name: MetricName) => {
      toggleMetric(state, name);
      redraw();
    },
  });
}

function showError(err: unknown): void {
  const message = err instanceof BundleError ? err.message : String(err);
  renderError(root(), `could not load bundle: ${message}`);
}

async function readJson(file: File): Promise<unknown> {
  return JSON.parse(await file.text());
}

async function onBundleUpload(input: HTMLInputElement): Promise<void> {
  const file = input.files?.[0];
  if (!file) return;
  try {
    loadBundle(state, await readJson(file));
    redraw();
  } catch (err) {
    showError(err);
  }
}

async function onPairUpload(refInput: HTMLInputElement, hypInput: HTMLInputElement): Promise<void> {
  const refFile = refInput.files?.[0];
  const hypFile = hypInput.files?.[0];
  if (!refFile || !hypFile) return;
  try {
    const response = await fetch("/evaluate", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        reference: await readJson(refFile),
        hypothesis: await readJson(hypFile),
      }),
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new BundleError(`service returned ${response.status}: ${detail}`);
    }
    loadBundle(state, await response.json());
    redraw();
  } catch (err) {
    showError(err);
  }
}

export function bootstrap(): void {
  const bundleInput = document.getElementById("bundle-file") as HTMLInputElement | null;
  const refInput = document.getElementById("ref-file") as HTMLInputElement | null;
  const hypInput = document.getElementById("hyp-file") as HTMLInputElement | null;
  bundleInput?.addEventListener("change", () => void onBundleUpload(bundleInput));
  const maybeEvaluate = () => {
    if (refInput && hypInput) void onPairUpload(refInput, hypInput);
  };
  refInput?.addEventListener("change", maybeEvaluate);
  hypInput?.addEventListener("change", maybeEvaluate);
  redraw();
}

if (typeof document !== "undefined" && document.getElementById("viewer-root")) {
  bootstrap();
}
