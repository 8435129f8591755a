/** Typed client for the calibration service. All numbers shown anywhere in
 * the workbench originate from these responses. */

import type {
  DiagramResponse,
  FeaturesResponse,
  LrdResponse,
  ModelResponse,
  RegionResponse,
  SessionResponse,
  SubgroupPayload,
} from "./types.js";
import type { CurveKey } from "./state.js";

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  const body = await response.json();
  if (!response.ok) {
    const err = (body as { error?: { code?: string; message?: string } }).error;
    throw new ApiError(err?.code ?? "unknown", err?.message ?? response.statusText, response.status);
  }
  return body as T;
}

function post<T>(path: string, payload: unknown): Promise<T> {
  return request<T>(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

function curveQuery(key: CurveKey): URLSearchParams {
  const params = new URLSearchParams({ model: key.model, mode: key.mode });
  if (key.classIndex !== null) params.set("class", String(key.classIndex));
  if (key.subgroup) params.set("subgroup", key.subgroup);
  return params;
}

export function createSession(featuresCsv: string): Promise<SessionResponse> {
  return post("/sessions", { features_csv: featuresCsv });
}

export function addModel(
  sessionId: string,
  name: string,
  probsCsv: string,
  labelsCsv: string,
): Promise<ModelResponse> {
  return post(`/sessions/${sessionId}/models`, {
    name,
    probs_csv: probsCsv,
    labels_csv: labelsCsv,
  });
}

export function getDiagram(sessionId: string, key: CurveKey): Promise<DiagramResponse> {
  const params = curveQuery(key);
  params.set("bins", String(key.bins));
  params.set("strategy", key.strategy);
  return request(`/sessions/${sessionId}/diagram?${params}`);
}

export function getLrd(
  sessionId: string,
  key: CurveKey,
  band = false,
): Promise<LrdResponse> {
  const params = curveQuery(key);
  if (band) params.set("band", "true");
  return request(`/sessions/${sessionId}/lrd?${params}`);
}

export function getRegion(
  sessionId: string,
  key: CurveKey,
  lo: number,
  hi: number,
  offset: number,
  limit: number,
): Promise<RegionResponse> {
  const params = curveQuery(key);
  params.set("lo", String(lo));
  params.set("hi", String(hi));
  params.set("offset", String(offset));
  params.set("limit", String(limit));
  return request(`/sessions/${sessionId}/region?${params}`);
}

export function getFeatures(
  sessionId: string,
  subgroup: string | null,
): Promise<FeaturesResponse> {
  const params = new URLSearchParams();
  if (subgroup) params.set("subgroup", subgroup);
  const suffix = params.size > 0 ? `?${params}` : "";
  return request(`/sessions/${sessionId}/features${suffix}`);
}

export function createSubgroup(
  sessionId: string,
  payload: SubgroupPayload,
): Promise<{ label: string; n_match: number }> {
  return post(`/sessions/${sessionId}/subgroups`, payload);
}

export function listSubgroups(sessionId: string): Promise<{ subgroups: SubgroupPayload[] }> {
  return request(`/sessions/${sessionId}/subgroups`);
}
