/** SVG path construction for calibration curves. The learned diagram is
 * piecewise-constant data; the smooth variant is a display-only monotone
 * interpolation and never feeds back into any number shown to the user. */

import type { LinearScale } from "../scale.js";

export type Point = [number, number];

function px(scale: LinearScale, v: number): string {
  return scale.apply(v).toFixed(2);
}

export function polylinePoints(points: Point[], sx: LinearScale, sy: LinearScale): string {
  return points.map(([x, y]) => `${px(sx, x)},${px(sy, y)}`).join(" ");
}

/** Step-after path: horizontal run to the next x, then the vertical jump. */
export function stepPath(points: Point[], sx: LinearScale, sy: LinearScale): string {
  if (points.length === 0) return "";
  const [x0, y0] = points[0];
  const parts = [`M ${px(sx, x0)} ${px(sy, y0)}`];
  for (let i = 1; i < points.length; i++) {
    parts.push(`H ${px(sx, points[i][0])}`);
    parts.push(`V ${px(sy, points[i][1])}`);
  }
  return parts.join(" ");
}

/** Fritsch-Carlson monotone cubic through the step samples (display only). */
export function smoothPath(points: Point[], sx: LinearScale, sy: LinearScale): string {
  const n = points.length;
  if (n === 0) return "";
  if (n === 1) return `M ${px(sx, points[0][0])} ${px(sy, points[0][1])}`;
  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const dx = new Array<number>(n - 1);
  const slope = new Array<number>(n - 1);
  for (let i = 0; i < n - 1; i++) {
    dx[i] = xs[i + 1] - xs[i] || 1e-12;
    slope[i] = (ys[i + 1] - ys[i]) / dx[i];
  }
  const tangent = new Array<number>(n);
  tangent[0] = slope[0];
  tangent[n - 1] = slope[n - 2];
  for (let i = 1; i < n - 1; i++) {
    if (slope[i - 1] * slope[i] <= 0) {
      tangent[i] = 0;
    } else {
      const w1 = 2 * dx[i] + dx[i - 1];
      const w2 = dx[i] + 2 * dx[i - 1];
      tangent[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
    }
  }
  const parts = [`M ${px(sx, xs[0])} ${px(sy, ys[0])}`];
  for (let i = 0; i < n - 1; i++) {
    const cx1 = xs[i] + dx[i] / 3;
    const cy1 = ys[i] + (tangent[i] * dx[i]) / 3;
    const cx2 = xs[i + 1] - dx[i] / 3;
    const cy2 = ys[i + 1] - (tangent[i + 1] * dx[i]) / 3;
    parts.push(
      `C ${px(sx, cx1)} ${px(sy, cy1)} ${px(sx, cx2)} ${px(sy, cy2)} ` +
        `${px(sx, xs[i + 1])} ${px(sy, ys[i + 1])}`,
    );
  }
  return parts.join(" ");
}

/** Closed band outline from per-point (x, lo, hi) triples. */
export function bandPolygon(
  triples: Array<[number, number, number]>,
  sx: LinearScale,
  sy: LinearScale,
): string {
  const upper = triples.map(([x, , hi]) => `${px(sx, x)},${px(sy, hi)}`);
  const lower = [...triples].reverse().map(([x, lo]) => `${px(sx, x)},${px(sy, lo)}`);
  return [...upper, ...lower].join(" ");
}
