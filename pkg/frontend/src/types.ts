/** Payload shapes of the explanation service, mirrored field for field. */

export interface DatasetSummary {
  id: string;
  name: string;
  n_instances: number;
  n_features: number;
  n_classes: number;
  class_names: string[];
  n_train: number;
  n_test: number;
}

export interface DatasetDetail extends DatasetSummary {
  feature_names: string[];
  class_counts: Record<string, number>;
}

export interface InstancePayload {
  dataset_id: string;
  index: number;
  split: string;
  values: number[];
  feature_names: string[];
  true_class: number;
  true_class_name: string;
}

export interface ModelInfo {
  model_id: string;
  dataset_id: string;
  kind: string;
  seed: number;
  f1: number;
  converged: boolean;
}

export interface Prediction {
  model_id: string;
  predicted_class: number;
  predicted_class_name: string;
  distribution: number[];
  class_names: string[];
}

export interface LiteralPayload {
  feature: number;
  feature_name?: string;
  lower: number | null;
  upper: number | null;
}

export interface ExplanationPayload {
  fact: number;
  foil: number;
  literals: LiteralPayload[];
  x_q: number[];
  fact_leaf: number;
  foil_leaf: number | null;
  fidelity: number;
  zero_length: boolean;
  foil_region_found: boolean;
  length: number;
}

export interface Dialogue {
  qualitative: string[];
  quantitative: string[];
}

export interface ExplainResponse {
  model_id: string;
  dataset_id: string;
  tree_id: string;
  explanation: ExplanationPayload;
  fact_name: string;
  foil_name: string;
  feature_names: string[];
  dialogue: Dialogue;
  verbosity: string;
  literal_nodes: number[];
}

export interface TreeNodePayload {
  id: number;
  depth: number;
  parent: number | null;
  is_leaf: boolean;
  feature: number | null;
  threshold: number | null;
  left: number | null;
  right: number | null;
  foil_weight: number;
  notfoil_weight: number;
  accuracy: number;
  label: string;
}

export interface TreeExport {
  root: number;
  fact_class: number | null;
  foil_class: number;
  n_features: number;
  degenerate: boolean;
  nodes: TreeNodePayload[];
}

export interface TreeResponse {
  tree_id: string;
  model_id: string;
  dataset_id: string;
  tree: TreeExport;
  fact_leaf: number;
  foil_leaf: number | null;
  complement_nodes: number[];
  literal_nodes: number[];
  feature_names: string[];
  class_names: string[];
}

export interface ApiErrorDetail {
  code: string;
  message: string;
}
