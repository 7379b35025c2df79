/** View state: one loaded bundle, metric selection, hover focus. */

import { Bundle, BundleError, METRIC_NAMES, MetricName, validateBundle } from "./types.js";

export interface ViewState {
  bundle: Bundle | null;
  selected: Set<MetricName>;
  hoverColumn: number | null;
  scroll: { reference: number; hypothesis: number };
}

export function createState(): ViewState {
  return {
    bundle: null,
    selected: new Set(METRIC_NAMES),
    hoverColumn: null,
    scroll: { reference: 0, hypothesis: 0 },
  };
}

export function loadBundle(state: ViewState, raw: unknown): Bundle {
  const bundle = validateBundle(raw);
  state.bundle = bundle;
  state.hoverColumn = null;
  state.scroll = { reference: 0, hypothesis: 0 };
  return bundle;
}

export function toggleMetric(state: ViewState, name: MetricName): void {
  if (state.selected.has(name)) {
    state.selected.delete(name);
  } else {
    state.selected.add(name);
  }
}

export function setHover(state: ViewState, column: number | null): void {
  if (column !== null) {
    const bundle = state.bundle;
    if (!bundle || column < 0 || column >= bundle.alignment.columns.length) {
      throw new BundleError(`hover focus ${column} is not an alignment column`);
    }
  }
  state.hoverColumn = column;
}
