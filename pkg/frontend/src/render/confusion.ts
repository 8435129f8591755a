/** Performance view: confusion-matrix heatmap for the current selection.
 * Cell text is the payload count verbatim; shading is display-only. */

import type { ConfusionPayload } from "../types.js";

export function renderPerformanceView(
  container: HTMLElement,
  confusion: ConfusionPayload | null,
): void {
  container.textContent = "";
  if (confusion === null) {
    const hint = document.createElement("p");
    hint.className = "hint";
    hint.textContent = "No selection; confusion matrix appears once instances match.";
    container.appendChild(hint);
    return;
  }
  const k = confusion.counts.length;
  const peak = Math.max(1, ...confusion.counts.flat());
  const table = document.createElement("table");
  table.className = "confusion-table";

  const head = document.createElement("tr");
  head.appendChild(document.createElement("th"));
  for (let j = 0; j < k; j++) {
    const th = document.createElement("th");
    th.textContent = `pred ${j}`;
    head.appendChild(th);
  }
  table.appendChild(head);

  for (let i = 0; i < k; i++) {
    const tr = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = `true ${i}`;
    tr.appendChild(th);
    for (let j = 0; j < k; j++) {
      const td = document.createElement("td");
      const count = confusion.counts[i][j];
      td.textContent = String(count);
      td.className = "confusion-cell";
      td.dataset.row = String(i);
      td.dataset.col = String(j);
      const alpha = count / peak;
      td.style.backgroundColor = `rgba(31, 119, 180, ${alpha.toFixed(3)})`;
      if (alpha > 0.6) td.style.color = "white";
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  container.appendChild(table);

  const total = document.createElement("p");
  total.className = "confusion-total";
  total.textContent = `total ${String(confusion.total)}`;
  container.appendChild(total);
}
