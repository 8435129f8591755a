/** Workbench wiring: four linked views over the calibration service.
 *
 * The client never recomputes a metric: views render service payloads as-is.
 * Brushing issues exactly one debounced /region request (150 ms); stale
 * responses are dropped by a latest-wins token. API errors render inline in
 * the status bar and never blank the workbench.
 */

import * as api from "./api.js";
import { debounce, LatestWins } from "./debounce.js";
import {
  addCurve,
  clearBrush,
  clearCurves,
  clearFeatureBrush,
  initialState,
  removeCurve,
  resetProjection,
  selectCurve,
  selectedCurve,
  setBrush,
  setFeatureBrush,
  setFeatureOrder,
  setPage,
  setSession,
  setSmoothDisplay,
  subgroupFromBrushes,
  toggleFeatureCategory,
  toggleVisible,
  type CurveKey,
  type Mode,
  type WorkbenchState,
} from "./state.js";
import { curveLabel, renderCalibrationView, type CurveData } from "./render/calibration.js";
import { renderFeatureView } from "./render/features.js";
import { renderInstanceView } from "./render/instances.js";
import { renderPerformanceView } from "./render/confusion.js";
import type { FeaturesResponse, RegionResponse } from "./types.js";

const BRUSH_DEBOUNCE_MS = 150;

class Workbench {
  state: WorkbenchState = initialState();
  curveData = new Map<number, CurveData>();
  features: FeaturesResponse | null = null;
  region: RegionResponse | null = null;
  featureColumns: string[] = [];
  private regionRequests = new LatestWins();
  private queueRegionFetch = debounce(() => void this.fetchRegion(), BRUSH_DEBOUNCE_MS);

  constructor(private root: Document) {}

  // ---- helpers ----------------------------------------------------------

  private byId<T extends HTMLElement>(id: string): T {
    const node = this.root.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  }

  private status(message: string, isError = false): void {
    const bar = this.byId<HTMLElement>("status");
    bar.textContent = message;
    bar.className = isError ? "status error" : "status";
  }

  private async guard<T>(work: Promise<T>): Promise<T | null> {
    try {
      const result = await work;
      this.status("ready");
      return result;
    } catch (error) {
      if (error instanceof api.ApiError) {
        this.status(`${error.code}: ${error.message}`, true);
      } else {
        this.status(String(error), true);
      }
      return null;
    }
  }

  // ---- data flows -------------------------------------------------------

  async createSession(): Promise<void> {
    const csv = this.byId<HTMLTextAreaElement>("features-csv").value;
    const created = await this.guard(api.createSession(csv));
    if (!created) return;
    this.state = setSession(this.state, created.session_id);
    this.curveData.clear();
    this.region = null;
    this.featureColumns = created.columns.map((c) => c.name);
    this.features = await this.guard(api.getFeatures(created.session_id, null));
    this.status(`session ${created.session_id}: ${created.n_rows} rows`);
    this.renderAll();
  }

  async addModel(): Promise<void> {
    if (!this.state.sessionId) return;
    const name = this.byId<HTMLInputElement>("model-name").value.trim();
    const probs = this.byId<HTMLTextAreaElement>("probs-csv").value;
    const labels = this.byId<HTMLTextAreaElement>("labels-csv").value;
    const added = await this.guard(api.addModel(this.state.sessionId, name, probs, labels));
    if (added) this.status(`model ${added.model} registered (n=${added.n}, k=${added.k})`);
  }

  currentKey(subgroup: string | null = null): CurveKey {
    const mode = this.byId<HTMLSelectElement>("mode-select").value as Mode;
    const classRaw = this.byId<HTMLInputElement>("class-input").value;
    return {
      model: this.byId<HTMLInputElement>("curve-model").value.trim(),
      mode,
      classIndex: mode === "classwise" ? Number(classRaw || "0") : null,
      subgroup,
      bins: Number(this.byId<HTMLInputElement>("bins-input").value || "10"),
      strategy: this.byId<HTMLSelectElement>("strategy-select").value as "uniform" | "quantile",
      lrd: this.byId<HTMLInputElement>("lrd-toggle").checked,
    };
  }

  async addCurveFromControls(subgroup: string | null = null): Promise<void> {
    if (!this.state.sessionId) return;
    const key = this.currentKey(subgroup);
    const sessionId = this.state.sessionId;
    const diagram = await this.guard(api.getDiagram(sessionId, key));
    if (!diagram) return;
    const lrd = key.lrd
      ? await this.guard(api.getLrd(sessionId, key, this.byId<HTMLInputElement>("band-toggle").checked))
      : null;
    this.state = addCurve(this.state, key);
    const entry = this.state.curves[this.state.curves.length - 1];
    this.curveData.set(entry.id, { entry, diagram, lrd });
    this.renderAll();
  }

  /** Exactly one region request per settled brush; stale responses dropped. */
  private async fetchRegion(): Promise<void> {
    const selected = selectedCurve(this.state);
    if (!this.state.sessionId || !selected || !this.state.brush) {
      this.region = null;
      this.renderLinkedViews();
      return;
    }
    const [lo, hi] = this.state.brush;
    const token = this.regionRequests.begin();
    const response = await this.guard(
      api.getRegion(
        this.state.sessionId,
        selected,
        lo,
        hi,
        this.state.page.offset,
        this.state.page.limit,
      ),
    );
    if (response && this.regionRequests.isCurrent(token)) {
      this.region = response;
      this.renderLinkedViews();
    }
  }

  async createSubgroupFromSelection(label: string): Promise<void> {
    if (!this.state.sessionId) return;
    const payload = subgroupFromBrushes(this.state, label);
    if (payload.constraints.length === 0) {
      this.status("brush at least one feature first", true);
      return;
    }
    const created = await this.guard(
      api.createSubgroup(this.state.sessionId, payload as never),
    );
    if (!created) return;
    this.status(`subgroup ${created.label}: ${created.n_match} rows`);
    await this.addCurveFromControls(created.label);
  }

  // ---- event handlers ---------------------------------------------------

  onSelectCurve(id: number): void {
    const already = selectedCurve(this.state)?.id === id;
    this.state = selectCurve(this.state, already ? null : id);
    this.renderAll();
    this.queueRegionFetch();
  }

  onBrush(lo: number, hi: number): void {
    if (!selectedCurve(this.state)) {
      this.status("select a curve before brushing", true);
      return;
    }
    this.state = setBrush(this.state, lo, hi);
    this.renderCalibration();
    this.queueRegionFetch();
  }

  onClearBrush(): void {
    this.state = clearBrush(this.state);
    this.region = null;
    this.renderAll();
  }

  onProjectionChanged(): void {
    this.state = resetProjection(this.state);
    this.region = null;
    this.renderAll();
  }

  onPage(offset: number): void {
    this.state = setPage(this.state, offset);
    this.queueRegionFetch();
  }

  // ---- rendering --------------------------------------------------------

  renderCalibration(): void {
    const curves = this.state.curves
      .map((entry) => {
        const data = this.curveData.get(entry.id);
        return data ? { ...data, entry } : null;
      })
      .filter((c): c is CurveData => c !== null);
    const selected = selectedCurve(this.state);
    const density = selected
      ? (this.curveData.get(selected.id)?.diagram?.density ?? null)
      : (curves[0]?.diagram?.density ?? null);
    renderCalibrationView(this.byId("calibration"), curves, density, this.state, {
      onSelect: (id) => this.onSelectCurve(id),
      onBrush: (lo, hi) => this.onBrush(lo, hi),
      onClearBrush: () => this.onClearBrush(),
    });
    this.renderCurveList();
  }

  renderCurveList(): void {
    const list = this.byId<HTMLElement>("curve-list");
    list.textContent = "";
    for (const entry of this.state.curves) {
      const item = document.createElement("div");
      item.className = entry.selected ? "curve-item selected" : "curve-item";
      const swatch = document.createElement("span");
      swatch.className = "swatch";
      swatch.style.backgroundColor = entry.color;
      const name = document.createElement("span");
      name.textContent = curveLabel(entry);
      name.addEventListener("click", () => this.onSelectCurve(entry.id));
      const hide = document.createElement("button");
      hide.textContent = entry.visible ? "hide" : "show";
      hide.addEventListener("click", () => {
        this.state = toggleVisible(this.state, entry.id);
        this.renderCalibration();
      });
      const remove = document.createElement("button");
      remove.textContent = "remove";
      remove.addEventListener("click", () => {
        this.state = removeCurve(this.state, entry.id);
        this.curveData.delete(entry.id);
        this.renderAll();
        this.queueRegionFetch();
      });
      item.append(swatch, name, hide, remove);
      list.appendChild(item);
    }
  }

  renderLinkedViews(): void {
    renderInstanceView(this.byId("instances"), this.region, this.featureColumns, {
      onPage: (offset) => this.onPage(offset),
    });
    renderPerformanceView(this.byId("performance"), this.region?.confusion ?? null);
  }

  renderFeatures(): void {
    renderFeatureView(this.byId("features"), this.features, this.state, {
      onNumericBrush: (column, interval, domain) => {
        this.state = setFeatureBrush(this.state, column, interval, domain);
        this.renderFeatures();
      },
      onClearNumericBrush: (column) => {
        this.state = clearFeatureBrush(this.state, column);
        this.renderFeatures();
      },
      onToggleCategory: (column, category) => {
        this.state = toggleFeatureCategory(this.state, column, category);
        this.renderFeatures();
      },
      onCreateSubgroup: (label) => void this.createSubgroupFromSelection(label),
    });
  }

  renderAll(): void {
    this.renderCalibration();
    this.renderFeatures();
    this.renderLinkedViews();
  }

  // ---- bootstrapping ----------------------------------------------------

  bind(): void {
    this.byId("create-session").addEventListener("click", () => void this.createSession());
    this.byId("add-model").addEventListener("click", () => void this.addModel());
    this.byId("add-curve").addEventListener("click", () => void this.addCurveFromControls());
    this.byId("clear-curves").addEventListener("click", () => {
      this.state = clearCurves(this.state);
      this.curveData.clear();
      this.region = null;
      this.renderAll();
    });
    this.byId("mode-select").addEventListener("change", () => this.onProjectionChanged());
    this.byId("class-input").addEventListener("change", () => this.onProjectionChanged());
    this.byId<HTMLInputElement>("smooth-toggle").addEventListener("change", (event) => {
      this.state = setSmoothDisplay(this.state, (event.target as HTMLInputElement).checked);
      this.renderCalibration();
    });
    this.byId<HTMLSelectElement>("feature-order").addEventListener("change", (event) => {
      const order = (event.target as HTMLSelectElement).value as "ingestion" | "variance";
      this.state = setFeatureOrder(this.state, order);
      this.renderFeatures();
    });
    this.renderAll();
    this.status("create a session to begin");
  }
}

export function boot(doc: Document = document): Workbench {
  const app = new Workbench(doc);
  app.bind();
  return app;
}

if (typeof document !== "undefined" && document.getElementById("calibration")) {
  boot();
}
