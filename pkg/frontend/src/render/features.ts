/** Feature view: scrollable per-feature histograms. Numeric columns take a
 * drag-brush; categorical bars toggle on click. A brushed selection can be
 * posted as a named subgroup, which then gets its own calibration curve. */

import { LinearScale, brushInterval } from "../scale.js";
import type { WorkbenchState } from "../state.js";
import type { FeatureHistogramPayload, FeaturesResponse } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const HIST = { width: 240, height: 72, left: 6, top: 4 };

export interface FeatureHandlers {
  onNumericBrush(column: string, interval: [number, number], domain: [number, number]): void;
  onClearNumericBrush(column: string): void;
  onToggleCategory(column: string, category: string): void;
  onCreateSubgroup(label: string): void;
}

/** Display-ordering helper: spread of the histogram, used by the variance
 * toggle. Numeric columns use the binned variance; categorical columns use
 * Gini diversity of the category shares. Display only. */
export function histogramSpread(column: FeatureHistogramPayload): number {
  const total = column.counts.reduce((a, b) => a + b, 0);
  if (total === 0) return 0;
  if (column.kind === "categorical") {
    const shares = column.counts.map((c) => c / total);
    return 1 - shares.reduce((a, s) => a + s * s, 0);
  }
  const edges = column.edges ?? [];
  const mids = column.counts.map((_, i) => (edges[i] + edges[i + 1]) / 2);
  const mean = mids.reduce((a, m, i) => a + (m * column.counts[i]) / total, 0);
  return mids.reduce((a, m, i) => a + ((m - mean) ** 2 * column.counts[i]) / total, 0);
}

export function orderColumns(
  columns: FeatureHistogramPayload[],
  order: "ingestion" | "variance",
): FeatureHistogramPayload[] {
  if (order === "ingestion") return columns;
  return [...columns].sort((a, b) => histogramSpread(b) - histogramSpread(a));
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag) as SVGElement;
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

function renderNumericHistogram(
  column: FeatureHistogramPayload,
  state: WorkbenchState,
  handlers: FeatureHandlers,
): SVGElement {
  const edges = column.edges ?? [0, 1];
  const domain: [number, number] = [edges[0], edges[edges.length - 1]];
  const sx = new LinearScale(domain[0], domain[1], HIST.left, HIST.left + HIST.width);
  const svg = svgEl("svg", {
    width: String(HIST.width + 2 * HIST.left),
    height: String(HIST.height + 18),
    class: "feature-hist",
    "data-column": column.column,
  });
  const peak = Math.max(...column.counts, 1);
  for (let i = 0; i < column.counts.length; i++) {
    const h = (HIST.height * column.counts[i]) / peak;
    svg.appendChild(
      svgEl("rect", {
        x: String(sx.apply(edges[i])),
        y: String(HIST.top + HIST.height - h),
        width: String(Math.max(1, sx.apply(edges[i + 1]) - sx.apply(edges[i]) - 0.5)),
        height: String(h),
        fill: "#8da0cb",
        class: "hist-bar",
      }),
    );
  }
  const brush = state.featureBrushes[column.column];
  if (brush) {
    svg.appendChild(
      svgEl("rect", {
        x: String(sx.apply(brush[0])),
        y: String(HIST.top),
        width: String(Math.max(0, sx.apply(brush[1]) - sx.apply(brush[0]))),
        height: String(HIST.height),
        fill: "#555",
        opacity: "0.18",
        class: "feature-brush-rect",
      }),
    );
  }
  const overlay = svgEl("rect", {
    x: String(HIST.left),
    y: String(HIST.top),
    width: String(HIST.width),
    height: String(HIST.height),
    fill: "transparent",
    class: "feature-brush-overlay",
  });
  const pixelOf = (event: Event): number =>
    HIST.left + ((event as MouseEvent).clientX - overlay.getBoundingClientRect().left);
  let start: number | null = null;
  overlay.addEventListener("mousedown", (event) => {
    start = pixelOf(event);
  });
  overlay.addEventListener("mouseup", (event) => {
    if (start === null) return;
    const interval = brushInterval(sx, start, pixelOf(event));
    start = null;
    if (Math.abs(interval[1] - interval[0]) > sx.pixelDataWidth()) {
      handlers.onNumericBrush(column.column, interval, domain);
    }
  });
  overlay.addEventListener("dblclick", () => handlers.onClearNumericBrush(column.column));
  svg.appendChild(overlay);
  return svg;
}

function renderCategoricalBars(
  column: FeatureHistogramPayload,
  state: WorkbenchState,
  handlers: FeatureHandlers,
): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "category-bars";
  const total = Math.max(...column.counts, 1);
  const picked = new Set(state.featureCategories[column.column] ?? []);
  (column.categories ?? []).forEach((category, i) => {
    const bar = document.createElement("button");
    bar.className = picked.has(category) ? "category-bar picked" : "category-bar";
    bar.dataset.category = category;
    bar.textContent = `${category} (${String(column.counts[i])})`;
    bar.style.setProperty("--fill", `${(100 * column.counts[i]) / total}%`);
    bar.addEventListener("click", () => handlers.onToggleCategory(column.column, category));
    wrap.appendChild(bar);
  });
  return wrap;
}

export function renderFeatureView(
  container: HTMLElement,
  features: FeaturesResponse | null,
  state: WorkbenchState,
  handlers: FeatureHandlers,
): void {
  container.textContent = "";
  if (features === null) {
    const hint = document.createElement("p");
    hint.className = "hint";
    hint.textContent = "Create a session to browse feature distributions.";
    container.appendChild(hint);
    return;
  }

  const actions = document.createElement("div");
  actions.className = "feature-actions";
  const labelInput = document.createElement("input");
  labelInput.placeholder = "subgroup name";
  labelInput.className = "subgroup-label";
  const button = document.createElement("button");
  button.textContent = "create diagram from selection";
  button.className = "create-subgroup";
  button.addEventListener("click", () => {
    if (labelInput.value.trim()) handlers.onCreateSubgroup(labelInput.value.trim());
  });
  actions.append(labelInput, button);
  container.appendChild(actions);

  const list = document.createElement("div");
  list.className = "feature-list";
  for (const column of orderColumns(features.columns, state.featureOrder)) {
    const block = document.createElement("div");
    block.className = "feature-block";
    const title = document.createElement("h4");
    title.textContent = column.column;
    block.appendChild(title);
    if (column.kind === "numeric") {
      block.appendChild(renderNumericHistogram(column, state, handlers));
    } else {
      block.appendChild(renderCategoricalBars(column, state, handlers));
    }
    list.appendChild(block);
  }
  container.appendChild(list);
}
