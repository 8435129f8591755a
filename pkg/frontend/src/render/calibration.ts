/** Calibration view: diagonal, binned curves, learned-diagram step curves
 * with optional band, a density strip, hover tooltips, and the score brush.
 * Everything drawn comes straight from service payloads. */

import { LinearScale, brushInterval } from "../scale.js";
import type { CurveEntry, WorkbenchState } from "../state.js";
import type { DensityPayload, DiagramResponse, LrdResponse } from "../types.js";
import { bandPolygon, polylinePoints, smoothPath, stepPath } from "./paths.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const PLOT = { size: 420, left: 46, top: 12, stripGap: 10, stripHeight: 48, bottom: 34 };

export interface CurveData {
  entry: CurveEntry;
  diagram: DiagramResponse | null;
  lrd: LrdResponse | null;
}

export interface CalibrationHandlers {
  onSelect(id: number): void;
  onBrush(lo: number, hi: number): void;
  onClearBrush(): void;
}

export function scaleX(): LinearScale {
  return new LinearScale(0, 1, PLOT.left, PLOT.left + PLOT.size);
}

export function scaleY(): LinearScale {
  return new LinearScale(0, 1, PLOT.top + PLOT.size, PLOT.top);
}

function el<K extends string>(tag: K, attrs: Record<string, string> = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag) as SVGElement;
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

/** Tooltip text with the curve's salient payload numbers, verbatim. */
export function tooltipText(data: CurveData): string {
  const parts = [curveLabel(data.entry)];
  if (data.diagram) {
    const m = data.diagram.metrics;
    parts.push(`ECE ${String(m.ece)}`, `MCE ${String(m.mce)}`, `N ${String(m.n)}`);
  }
  if (data.lrd) {
    parts.push(`LRD ECE ${String(data.lrd.lrd.lrd_expected_error)}`);
  }
  return parts.join(" | ");
}

export function curveLabel(entry: CurveEntry): string {
  const mode = entry.mode === "confidence" ? "confidence" : `class ${entry.classIndex}`;
  const subgroup = entry.subgroup ? ` / ${entry.subgroup}` : "";
  return `${entry.model} (${mode}${subgroup})`;
}

export function renderCalibrationView(
  container: HTMLElement,
  curves: CurveData[],
  density: DensityPayload | null,
  state: WorkbenchState,
  handlers: CalibrationHandlers,
): void {
  container.textContent = "";
  const sx = scaleX();
  const sy = scaleY();
  const width = PLOT.left + PLOT.size + 12;
  const stripTop = PLOT.top + PLOT.size + PLOT.stripGap;
  const height = stripTop + (density ? PLOT.stripHeight : 0) + PLOT.bottom;
  const svg = el("svg", {
    width: String(width),
    height: String(height),
    viewBox: `0 0 ${width} ${height}`,
    class: "calibration-svg",
  });

  svg.appendChild(
    el("rect", {
      x: String(PLOT.left),
      y: String(PLOT.top),
      width: String(PLOT.size),
      height: String(PLOT.size),
      fill: "white",
      stroke: "#555",
    }),
  );
  for (let k = 0; k <= 4; k++) {
    const v = k / 4;
    const label = el("text", {
      x: String(sx.apply(v)),
      y: String(PLOT.top + PLOT.size + 16),
      "text-anchor": "middle",
      class: "axis-label",
    });
    label.textContent = v.toFixed(2);
    svg.appendChild(label);
    const ylabel = el("text", {
      x: String(PLOT.left - 6),
      y: String(sy.apply(v) + 4),
      "text-anchor": "end",
      class: "axis-label",
    });
    ylabel.textContent = v.toFixed(2);
    svg.appendChild(ylabel);
  }

  svg.appendChild(
    el("line", {
      x1: String(sx.apply(0)),
      y1: String(sy.apply(0)),
      x2: String(sx.apply(1)),
      y2: String(sy.apply(1)),
      stroke: "#999",
      "stroke-dasharray": "6,4",
      class: "diagonal",
    }),
  );

  for (const data of curves) {
    if (!data.entry.visible) continue;
    const group = el("g", { class: "curve", "data-curve-id": String(data.entry.id) });
    const strokeWidth = data.entry.selected ? "3.5" : "2";
    if (data.lrd) {
      const points = data.lrd.lrd.grid.map((p) => [p.x, p.f] as [number, number]);
      const banded = data.lrd.lrd.grid.filter((p) => p.lo !== undefined);
      if (banded.length > 0) {
        group.appendChild(
          el("polygon", {
            points: bandPolygon(
              banded.map((p) => [p.x, p.lo as number, p.hi as number]),
              sx,
              sy,
            ),
            fill: data.entry.color,
            opacity: "0.15",
            class: "lrd-band",
          }),
        );
      }
      group.appendChild(
        el("path", {
          d: state.smoothDisplay ? smoothPath(points, sx, sy) : stepPath(points, sx, sy),
          fill: "none",
          stroke: data.entry.color,
          "stroke-width": strokeWidth,
          "stroke-dasharray": "5,3",
          class: state.smoothDisplay ? "lrd-curve smooth" : "lrd-curve step",
        }),
      );
    }
    if (data.diagram) {
      const points = data.diagram.diagram.bins.map(
        (b) => [b.conf, b.acc] as [number, number],
      );
      group.appendChild(
        el("polyline", {
          points: polylinePoints(points, sx, sy),
          fill: "none",
          stroke: data.entry.color,
          "stroke-width": strokeWidth,
          class: "binned-curve",
        }),
      );
      for (const [x, y] of points) {
        group.appendChild(
          el("circle", {
            cx: String(sx.apply(x)),
            cy: String(sy.apply(y)),
            r: "3",
            fill: data.entry.color,
          }),
        );
      }
    }
    const title = el("title");
    title.textContent = tooltipText(data);
    group.appendChild(title);
    group.addEventListener("click", () => handlers.onSelect(data.entry.id));
    svg.appendChild(group);
  }

  if (density) {
    const peak = Math.max(...density.counts, 1);
    for (let i = 0; i < density.counts.length; i++) {
      const x0 = sx.apply(density.edges[i]);
      const x1 = sx.apply(density.edges[i + 1]);
      const h = (PLOT.stripHeight * density.counts[i]) / peak;
      svg.appendChild(
        el("rect", {
          x: String(x0),
          y: String(stripTop + PLOT.stripHeight - h),
          width: String(x1 - x0),
          height: String(h),
          fill: "#9ecae1",
          class: "density-bar",
        }),
      );
    }
  }

  if (state.brush) {
    const [lo, hi] = state.brush;
    svg.appendChild(
      el("rect", {
        x: String(sx.apply(lo)),
        y: String(PLOT.top),
        width: String(Math.max(0, sx.apply(hi) - sx.apply(lo))),
        height: String(PLOT.size),
        fill: "#555",
        opacity: "0.12",
        class: "brush-rect",
      }),
    );
  }

  // brush overlay: drag to select a score interval, double-click to clear
  const overlay = el("rect", {
    x: String(PLOT.left),
    y: String(PLOT.top),
    width: String(PLOT.size),
    height: String(PLOT.size),
    fill: "transparent",
    class: "brush-overlay",
  });
  const pixelOf = (event: Event): number =>
    PLOT.left + ((event as MouseEvent).clientX - overlay.getBoundingClientRect().left);
  let dragStart: number | null = null;
  overlay.addEventListener("mousedown", (event) => {
    dragStart = pixelOf(event);
  });
  overlay.addEventListener("mouseup", (event) => {
    if (dragStart === null) return;
    const [lo, hi] = brushInterval(sx, dragStart, pixelOf(event));
    dragStart = null;
    if (Math.abs(hi - lo) > sx.pixelDataWidth()) handlers.onBrush(lo, hi);
  });
  overlay.addEventListener("dblclick", () => handlers.onClearBrush());
  svg.appendChild(overlay);

  container.appendChild(svg);
}
