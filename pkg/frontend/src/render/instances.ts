/** Instance view: a paged table of the rows inside the brushed region with a
 * footer of per-feature means. Cell text is the payload value verbatim. */

import type { FeatureMeans, RegionResponse } from "../types.js";

export interface InstanceHandlers {
  onPage(offset: number): void;
}

export function meansCellText(value: number | Record<string, number>): string {
  if (typeof value === "number") return String(value);
  return Object.entries(value)
    .map(([category, share]) => `${category}: ${String(share)}`)
    .join(", ");
}

/** Pure view-model: header, body rows, and footer cells as verbatim strings. */
export function instanceTableModel(
  region: RegionResponse,
  featureColumns: string[],
): { header: string[]; rows: string[][]; footer: string[] } {
  const header = ["#", "score", "outcome", "label", "predicted", ...featureColumns];
  const rows = region.rows.map((row) => [
    String(row.index),
    String(row.score),
    String(row.outcome),
    String(row.label),
    String(row.predicted),
    ...featureColumns.map((name) => String(row.features[name])),
  ]);
  const means: FeatureMeans = region.feature_means ?? {};
  const footer = [
    "mean",
    "",
    "",
    "",
    "",
    ...featureColumns.map((name) =>
      name in means ? meansCellText(means[name]) : "",
    ),
  ];
  return { header, rows, footer };
}

export function renderInstanceView(
  container: HTMLElement,
  region: RegionResponse | null,
  featureColumns: string[],
  handlers: InstanceHandlers,
): void {
  container.textContent = "";
  if (region === null) {
    const hint = document.createElement("p");
    hint.className = "hint";
    hint.textContent = "Select a curve and brush a score region to inspect instances.";
    container.appendChild(hint);
    return;
  }
  const summary = document.createElement("p");
  summary.className = "region-summary";
  summary.textContent = `${String(region.count)} instances in region`;
  container.appendChild(summary);

  if (region.count === 0) {
    const empty = document.createElement("p");
    empty.className = "hint empty-selection";
    empty.textContent = "No instances match this selection.";
    container.appendChild(empty);
    return;
  }

  const model = instanceTableModel(region, featureColumns);
  const table = document.createElement("table");
  table.className = "instance-table";
  const thead = document.createElement("thead");
  const headRow = document.createElement("tr");
  for (const name of model.header) {
    const th = document.createElement("th");
    th.textContent = name;
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = document.createElement("tbody");
  for (const row of model.rows) {
    const tr = document.createElement("tr");
    for (const cell of row) {
      const td = document.createElement("td");
      td.textContent = cell;
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);

  const tfoot = document.createElement("tfoot");
  const footRow = document.createElement("tr");
  footRow.className = "means-row";
  for (const cell of model.footer) {
    const td = document.createElement("td");
    td.textContent = cell;
    footRow.appendChild(td);
  }
  tfoot.appendChild(footRow);
  table.appendChild(tfoot);
  container.appendChild(table);

  const nav = document.createElement("div");
  nav.className = "pager";
  const prev = document.createElement("button");
  prev.textContent = "prev";
  prev.disabled = region.offset === 0;
  prev.addEventListener("click", () =>
    handlers.onPage(Math.max(0, region.offset - region.limit)),
  );
  const next = document.createElement("button");
  next.textContent = "next";
  next.disabled = region.offset + region.limit >= region.count;
  next.addEventListener("click", () => handlers.onPage(region.offset + region.limit));
  const pos = document.createElement("span");
  pos.textContent =
    `offset ${String(region.offset)} · limit ${String(region.limit)}` +
    ` · total ${String(region.count)}`;
  nav.append(prev, pos, next);
  container.appendChild(nav);
}
