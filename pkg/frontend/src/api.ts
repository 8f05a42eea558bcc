import type {
  ApiErrorDetail,
  DatasetDetail,
  DatasetSummary,
  ExplainResponse,
  InstancePayload,
  ModelInfo,
  Prediction,
  TreeResponse,
} from "./types.js";

/** Error raised for non-2xx responses, keeping the service's machine code. */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, detail: ApiErrorDetail | string) {
    const code = typeof detail === "string" ? "HTTP_ERROR" : detail.code;
    const message = typeof detail === "string" ? detail : detail.message;
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

export interface ExplainOptions {
  foil?: number | string;
  seed?: number;
  method?: string;
  strategy?: string;
  lam?: number;
  m?: number;
}

type FetchLike = typeof fetch;

/** Thin typed client; every method maps to exactly one endpoint. */
export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl: FetchLike = fetch) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(`${this.base}${path}`, init);
    const body = await resp.json().catch(() => null);
    if (!resp.ok) {
      const detail =
        body && typeof body === "object" && "detail" in body
          ? (body.detail as ApiErrorDetail)
          : `request to ${path} failed with ${resp.status}`;
      throw new ApiError(resp.status, detail);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  listDatasets(): Promise<DatasetSummary[]> {
    return this.request("/datasets");
  }

  datasetDetail(id: string): Promise<DatasetDetail> {
    return this.request(`/datasets/${encodeURIComponent(id)}`);
  }

  instance(datasetId: string, index: number): Promise<InstancePayload> {
    return this.request(`/datasets/${encodeURIComponent(datasetId)}/instances/${index}`);
  }

  trainModel(datasetId: string, kind: string, seed = 0): Promise<ModelInfo> {
    return this.post("/models", { dataset_id: datasetId, kind, seed });
  }

  predict(modelId: string, testIndex: number): Promise<Prediction> {
    return this.post(`/models/${encodeURIComponent(modelId)}/predict`, {
      test_index: testIndex,
    });
  }

  explain(modelId: string, testIndex: number, options: ExplainOptions = {}): Promise<ExplainResponse> {
    return this.post("/explain", {
      model_id: modelId,
      test_index: testIndex,
      ...options,
    });
  }

  tree(treeId: string): Promise<TreeResponse> {
    return this.request(`/trees/${encodeURIComponent(treeId)}`);
  }
}
