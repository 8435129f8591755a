/** Workbench state and its pure update functions.
 *
 * Invariants kept here: at most one curve is selected (the brush target),
 * and every stored brush interval lies inside its axis domain. Changing the
 * projection (mode/class) of the add-curve controls resets the selection and
 * the brush, since both refer to the previous projection.
 */

import { colorFor } from "./palette.js";

export type Mode = "confidence" | "classwise";

export interface CurveKey {
  model: string;
  mode: Mode;
  classIndex: number | null;
  subgroup: string | null;
  bins: number;
  strategy: "uniform" | "quantile";
  lrd: boolean;
}

export interface CurveEntry extends CurveKey {
  id: number;
  color: string;
  visible: boolean;
  selected: boolean;
}

export interface PageCursor {
  offset: number;
  limit: number;
}

export interface WorkbenchState {
  sessionId: string | null;
  curves: CurveEntry[];
  nextCurveId: number;
  createdCount: number;
  brush: [number, number] | null;
  featureBrushes: Record<string, [number, number]>;
  featureCategories: Record<string, string[]>;
  page: PageCursor;
  smoothDisplay: boolean;
  featureOrder: "ingestion" | "variance";
}

export const PAGE_LIMIT = 100;

export function initialState(): WorkbenchState {
  return {
    sessionId: null,
    curves: [],
    nextCurveId: 1,
    createdCount: 0,
    brush: null,
    featureBrushes: {},
    featureCategories: {},
    page: { offset: 0, limit: PAGE_LIMIT },
    smoothDisplay: false,
    featureOrder: "ingestion",
  };
}

export function setSession(state: WorkbenchState, sessionId: string): WorkbenchState {
  return { ...initialState(), sessionId, smoothDisplay: state.smoothDisplay };
}

export function addCurve(state: WorkbenchState, key: CurveKey): WorkbenchState {
  const entry: CurveEntry = {
    ...key,
    id: state.nextCurveId,
    color: colorFor(state.createdCount),
    visible: true,
    selected: false,
  };
  return {
    ...state,
    curves: [...state.curves, entry],
    nextCurveId: state.nextCurveId + 1,
    createdCount: state.createdCount + 1,
  };
}

export function removeCurve(state: WorkbenchState, id: number): WorkbenchState {
  const removed = state.curves.find((c) => c.id === id);
  const curves = state.curves.filter((c) => c.id !== id);
  // removing the brush target also clears the brush
  const brush = removed?.selected ? null : state.brush;
  return { ...state, curves, brush };
}

export function clearCurves(state: WorkbenchState): WorkbenchState {
  return { ...state, curves: [], brush: null };
}

export function selectCurve(state: WorkbenchState, id: number | null): WorkbenchState {
  const curves = state.curves.map((c) => ({ ...c, selected: c.id === id }));
  const anySelected = curves.some((c) => c.selected);
  return { ...state, curves, brush: anySelected ? state.brush : null };
}

export function selectedCurve(state: WorkbenchState): CurveEntry | null {
  return state.curves.find((c) => c.selected) ?? null;
}

export function toggleVisible(state: WorkbenchState, id: number): WorkbenchState {
  return {
    ...state,
    curves: state.curves.map((c) => (c.id === id ? { ...c, visible: !c.visible } : c)),
  };
}

function clamp01(v: number): number {
  return Math.min(1, Math.max(0, v));
}

export function setBrush(state: WorkbenchState, lo: number, hi: number): WorkbenchState {
  const a = clamp01(lo);
  const b = clamp01(hi);
  const brush: [number, number] = a <= b ? [a, b] : [b, a];
  return { ...state, brush, page: { ...state.page, offset: 0 } };
}

export function clearBrush(state: WorkbenchState): WorkbenchState {
  return { ...state, brush: null, page: { ...state.page, offset: 0 } };
}

export function setFeatureBrush(
  state: WorkbenchState,
  column: string,
  interval: [number, number],
  domain: [number, number],
): WorkbenchState {
  const lo = Math.max(domain[0], Math.min(domain[1], interval[0]));
  const hi = Math.max(domain[0], Math.min(domain[1], interval[1]));
  return {
    ...state,
    featureBrushes: { ...state.featureBrushes, [column]: lo <= hi ? [lo, hi] : [hi, lo] },
  };
}

export function clearFeatureBrush(state: WorkbenchState, column: string): WorkbenchState {
  const brushes = { ...state.featureBrushes };
  delete brushes[column];
  return { ...state, featureBrushes: brushes };
}

export function toggleFeatureCategory(
  state: WorkbenchState,
  column: string,
  category: string,
): WorkbenchState {
  const current = state.featureCategories[column] ?? [];
  const next = current.includes(category)
    ? current.filter((c) => c !== category)
    : [...current, category];
  const featureCategories = { ...state.featureCategories };
  if (next.length === 0) {
    delete featureCategories[column];
  } else {
    featureCategories[column] = next;
  }
  return { ...state, featureCategories };
}

/** The feature brushes expressed as a subgroup predicate payload. */
export function subgroupFromBrushes(
  state: WorkbenchState,
  label: string,
): { label: string; constraints: Array<Record<string, unknown>> } {
  const constraints: Array<Record<string, unknown>> = [];
  for (const [column, [lo, hi]] of Object.entries(state.featureBrushes)) {
    constraints.push({ column, lo, hi });
  }
  for (const [column, categories] of Object.entries(state.featureCategories)) {
    constraints.push({ column, categories: [...categories].sort() });
  }
  return { label, constraints };
}

export function setPage(state: WorkbenchState, offset: number): WorkbenchState {
  return { ...state, page: { ...state.page, offset: Math.max(0, offset) } };
}

/** Mode/class toggles invalidate the selection and the brushed region. */
export function resetProjection(state: WorkbenchState): WorkbenchState {
  return {
    ...state,
    curves: state.curves.map((c) => ({ ...c, selected: false })),
    brush: null,
    page: { ...state.page, offset: 0 },
  };
}

export function setSmoothDisplay(state: WorkbenchState, on: boolean): WorkbenchState {
  return { ...state, smoothDisplay: on };
}

export function setFeatureOrder(
  state: WorkbenchState,
  order: "ingestion" | "variance",
): WorkbenchState {
  return { ...state, featureOrder: order };
}
