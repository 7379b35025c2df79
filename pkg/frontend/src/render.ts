/** DOM rendering: sidebar stats, metric cards, side-by-side alignment panels.
 *
 * The viewer is read-only over the bundle: every displayed value comes from
 * the evaluation report or the alignment columns, never from recomputation.
 */

import { setHover, ViewState } from "./state.js";
import {
  AlignmentColumn,
  Bundle,
  METRIC_NAMES,
  MetricName,
  columnHypSpeaker,
  speakerIncorrectColumns,
} from "./types.js";

const PALETTE = [
  "#4e79a7", "#f28e2b", "#59a245", "#b07aa1",
  "#76b7b2", "#edc948", "#e15759", "#9c755f",
];
const UNMAPPED_COLOR = "#9a9a9a";

type Side = "reference" | "hypothesis";

function tokenKey(utt: number, tok: number): string {
  return `${utt}:${tok}`;
}

function splitTokens(text: string): string[] {
  return text.split(/\s+/).filter((t) => t.length > 0);
}

/** Stable colors: reference speakers by list order; a mapped hypothesis
 * speaker shares its partner's color; unmapped speakers are grey. */
export function speakerColors(bundle: Bundle): Map<string, { color: string; unmapped: boolean }> {
  const colors = new Map<string, { color: string; unmapped: boolean }>();
  bundle.reference.speakers.forEach((speaker, i) => {
    colors.set(`reference:${speaker}`, {
      color: PALETTE[i % PALETTE.length]!,
      unmapped: bundle.mapping.unmapped_ref.includes(speaker),
    });
  });
  for (const speaker of bundle.hypothesis.speakers) {
    const partner = bundle.mapping.mapped[speaker];
    if (partner !== undefined) {
      const refIndex = bundle.reference.speakers.indexOf(partner);
      colors.set(`hypothesis:${speaker}`, {
        color: PALETTE[refIndex % PALETTE.length]!,
        unmapped: false,
      });
    } else {
      colors.set(`hypothesis:${speaker}`, { color: UNMAPPED_COLOR, unmapped: true });
    }
  }
  for (const speaker of bundle.reference.speakers) {
    if (bundle.mapping.unmapped_ref.includes(speaker)) {
      colors.set(`reference:${speaker}`, { color: UNMAPPED_COLOR, unmapped: true });
    }
  }
  return colors;
}

interface ColumnIndex {
  byHyp: Map<string, number>;
  byRef: Map<string, number>;
}

function indexColumns(columns: AlignmentColumn[]): ColumnIndex {
  const byHyp = new Map<string, number>();
  const byRef = new Map<string, number>();
  columns.forEach((col, i) => {
    if (col.hyp) byHyp.set(tokenKey(col.hyp.utt, col.hyp.tok), i);
    if (col.ref) byRef.set(tokenKey(col.ref.utt, col.ref.tok), i);
  });
  return { byHyp, byRef };
}

function formatValue(value: unknown): string {
  if (typeof value !== "number") return "n/a";
  return value.toFixed(4);
}

function metricCard(bundle: Bundle, name: MetricName): HTMLElement {
  const card = document.createElement("div");
  card.className = "metric-card";
  card.dataset.metric = name;
  const label = document.createElement("div");
  label.className = "metric-name";
  label.textContent = name;
  const value = document.createElement("div");
  value.className = "metric-value";
  const report = bundle.report;
  if (name === "DF1") {
    const df1 = report.df1;
    value.textContent = df1 ? formatValue(df1.f1) : "n/a";
    if (df1) {
      const detail = document.createElement("div");
      detail.className = "metric-detail";
      detail.textContent = `P ${formatValue(df1.precision)} · R ${formatValue(df1.recall)}`;
      card.append(label, value, detail);
      return card;
    }
  } else {
    const key = name.toLowerCase() as "wer" | "wder" | "tder";
    value.textContent = formatValue(report[key]);
  }
  card.append(label, value);
  return card;
}

function renderSidebar(bundle: Bundle, state: ViewState, onToggle: (name: MetricName) => void): HTMLElement {
  const sidebar = document.createElement("aside");
  sidebar.className = "sidebar";
  const stats = document.createElement("div");
  stats.className = "stats";
  for (const side of ["reference", "hypothesis"] as const) {
    const block = document.createElement("div");
    block.className = "stat-block";
    block.dataset.side = side;
    const title = document.createElement("h3");
    title.textContent = side;
    const tokens = document.createElement("div");
    tokens.className = "stat-tokens";
    tokens.textContent = `${bundle.stats[side].tokens} tokens`;
    const speakers = document.createElement("div");
    speakers.className = "stat-speakers";
    speakers.textContent = `${bundle.stats[side].speakers} speakers`;
    block.append(title, tokens, speakers);
    stats.append(block);
  }
  const picker = document.createElement("div");
  picker.className = "metric-picker";
  for (const name of METRIC_NAMES) {
    const item = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = state.selected.has(name);
    box.dataset.metric = name;
    box.addEventListener("change", () => onToggle(name));
    item.append(box, document.createTextNode(` ${name}`));
    picker.append(item);
  }
  sidebar.append(stats, picker);
  return sidebar;
}

function renderPanel(
  bundle: Bundle,
  side: Side,
  index: ColumnIndex,
  wrongColumns: Set<number>,
): HTMLElement {
  const transcript = bundle[side];
  const colors = speakerColors(bundle);
  const panel = document.createElement("section");
  panel.className = "panel";
  panel.dataset.side = side;
  const heading = document.createElement("h2");
  heading.textContent = side;
  panel.append(heading);
  const byToken = side === "hypothesis" ? index.byHyp : index.byRef;

  transcript.utterances.forEach((utt, uttIndex) => {
    const row = document.createElement("div");
    row.className = "utterance";
    const info = colors.get(`${side}:${utt.speaker}`) ?? { color: UNMAPPED_COLOR, unmapped: true };
    const bar = document.createElement("span");
    bar.className = "speaker-bar";
    bar.style.backgroundColor = info.color;
    const label = document.createElement("span");
    label.className = info.unmapped ? "speaker-label unmapped" : "speaker-label";
    label.textContent = utt.speaker;
    const tokens = document.createElement("p");
    tokens.className = "tokens";
    splitTokens(utt.text).forEach((surface, tokIndex) => {
      const span = document.createElement("span");
      span.className = "token";
      span.textContent = surface;
      span.dataset.side = side;
      span.dataset.utt = String(uttIndex);
      span.dataset.tok = String(tokIndex);
      const column = byToken.get(tokenKey(uttIndex, tokIndex));
      if (column !== undefined) {
        span.dataset.column = String(column);
        if (side === "hypothesis" && wrongColumns.has(column)) {
          span.classList.add("wrong-speaker");
        }
      }
      tokens.append(span);
      tokens.append(document.createTextNode(" "));
    });
    row.append(bar, label, tokens);
    panel.append(row);
  });
  return panel;
}

function partnerOf(root: HTMLElement, bundle: Bundle, span: HTMLElement): HTMLElement | null {
  const columnAttr = span.dataset.column;
  if (columnAttr === undefined) return null;
  const col = bundle.alignment.columns[Number(columnAttr)];
  if (!col) return null;
  const side = span.dataset.side as Side;
  const partnerRef = side === "hypothesis" ? col.ref : col.hyp;
  if (!partnerRef) return null;
  const partnerSide = side === "hypothesis" ? "reference" : "hypothesis";
  return root.querySelector<HTMLElement>(
    `.token[data-side="${partnerSide}"][data-utt="${partnerRef.utt}"][data-tok="${partnerRef.tok}"]`,
  );
}

function wireHover(root: HTMLElement, bundle: Bundle, state: ViewState): void {
  for (const span of root.querySelectorAll<HTMLElement>(".token")) {
    const partner = partnerOf(root, bundle, span);
    if (partner === null) {
      span.title = "no aligned token";
    } else {
      span.title = partner.textContent ?? "";
    }
    span.addEventListener("mouseenter", () => {
      span.classList.add("hover-self");
      if (partner !== null) partner.classList.add("hover-partner");
      const columnAttr = span.dataset.column;
      setHover(state, columnAttr === undefined ? null : Number(columnAttr));
    });
    span.addEventListener("mouseleave", () => {
      span.classList.remove("hover-self");
      if (partner !== null) partner.classList.remove("hover-partner");
      setHover(state, null);
    });
  }
}

export function renderError(root: HTMLElement, message: string): void {
  root.textContent = "";
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.textContent = message;
  root.append(banner);
}

export interface RenderHandlers {
  onToggleMetric?: (name: MetricName) => void;
}

/** Full render of the view state into the given root element. */
export function render(root: HTMLElement, state: ViewState, handlers: RenderHandlers = {}): void {
  const bundle = state.bundle;
  root.textContent = "";
  if (bundle === null) {
    const empty = document.createElement("div");
    empty.className = "placeholder";
    empty.textContent = "Upload a transcript pair or an evaluation bundle.";
    root.append(empty);
    return;
  }
  const layout = document.createElement("div");
  layout.className = "viewer";
  layout.append(renderSidebar(bundle, state, handlers.onToggleMetric ?? (() => undefined)));

  const content = document.createElement("main");
  content.className = "content";
  const selected = METRIC_NAMES.filter((name) => state.selected.has(name));
  if (selected.length > 0) {
    const cards = document.createElement("div");
    cards.className = "metric-cards";
    for (const name of selected) {
      cards.append(metricCard(bundle, name));
    }
    content.append(cards);
  }

  const index = indexColumns(bundle.alignment.columns);
  const wrongColumns = speakerIncorrectColumns(bundle);
  const panels = document.createElement("div");
  panels.className = "panels";
  panels.append(
    renderPanel(bundle, "reference", index, wrongColumns),
    renderPanel(bundle, "hypothesis", index, wrongColumns),
  );
  content.append(panels);
  layout.append(content);
  root.append(layout);
  wireHover(root, bundle, state);
}
