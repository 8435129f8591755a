/** Wire types mirroring the service's JSON payloads. The workbench never
 * computes metrics itself; every displayed number comes from these shapes. */

export interface BinPayload {
  lo: number;
  hi: number;
  count: number;
  conf: number;
  acc: number;
}

export interface DiagramPayload {
  edges: number[];
  bins: BinPayload[];
  n_total: number;
}

export interface MetricsPayload {
  n: number;
  accuracy: number;
  brier: number;
  log_loss: number;
  ece: number;
  mce: number;
  bin_spec: { strategy: string; count: number };
}

export interface DensityPayload {
  edges: number[];
  counts: number[];
}

export interface DiagramResponse {
  model: string;
  mode: string;
  class_index: number | null;
  subgroup: string | null;
  diagram: DiagramPayload;
  metrics: MetricsPayload;
  density: DensityPayload;
}

export interface LrdPoint {
  x: number;
  f: number;
  lo?: number;
  hi?: number;
}

export interface LrdPayload {
  cut_points: number[];
  piece_logits: number[];
  base_logit: number;
  grid: LrdPoint[];
  lrd_expected_error: number;
  lrd_area: number;
}

export interface LrdResponse {
  model: string;
  mode: string;
  class_index: number | null;
  subgroup: string | null;
  lrd: LrdPayload;
}

export interface InstanceRow {
  index: number;
  score: number;
  outcome: number;
  label: number;
  predicted: number;
  features: Record<string, number | string>;
}

export interface ConfusionPayload {
  counts: number[][];
  total: number;
}

export type FeatureMeans = Record<string, number | Record<string, number>>;

export interface RegionResponse {
  count: number;
  offset: number;
  limit: number;
  indices: number[];
  rows: InstanceRow[];
  feature_means: FeatureMeans | null;
  confusion: ConfusionPayload | null;
}

export interface FeatureHistogramPayload {
  column: string;
  kind: "numeric" | "categorical";
  edges?: number[];
  categories?: string[];
  counts: number[];
}

export interface FeaturesResponse {
  n: number;
  subgroup: string | null;
  columns: FeatureHistogramPayload[];
}

export interface SessionResponse {
  session_id: string;
  n_rows: number;
  columns: { name: string; kind: string }[];
}

export interface ModelResponse {
  model: string;
  n: number;
  k: number;
}

export interface SubgroupConstraint {
  column: string;
  lo?: number;
  hi?: number;
  categories?: string[];
}

export interface SubgroupPayload {
  label: string;
  constraints: SubgroupConstraint[];
}
