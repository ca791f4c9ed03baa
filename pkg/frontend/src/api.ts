/** Typed client for the analysis service (see docs/api.md in the repo root). */

export type MethodName = "stepwise" | "forward" | "stepaic" | "lasso";
export type MeasureName =
  | "alpha"
  | "authority"
  | "betweenness"
  | "closeness"
  | "degree"
  | "eigen"
  | "hub"
  | "pagerank"
  | "power";

export const ALL_MEASURES: MeasureName[] = [
  "alpha", "authority", "betweenness", "closeness", "degree",
  "eigen", "hub", "pagerank", "power",
];

export interface UploadResponse {
  session_id: string;
  columns: string[];
  m: number;
  d: number;
  warnings: string[];
}

export interface NetworkParams {
  p_enter?: number;
  p_exit?: number;
  lasso_lambda?: number | null;
}

export interface NetworkResponse {
  nodes: string[];
  edges: [string, string][];
  per_node_summary: Record<string, { selected: string[]; rss: number }>;
  elapsed_ms: number;
  build_count: number;
}

export interface CentralityResponse {
  measure: string;
  params: Record<string, number>;
  scores: Record<string, number>;
  ranking: string[];
  fallback_used: boolean;
}

export interface KMeansPayload {
  k: number;
  labels: number[];
  centroids: number[][];
  wcss: number;
  iterations: number;
  seed: number;
}

export interface GmmPayload {
  k: number;
  covariance_type: string;
  weights: number[];
  log_likelihood: number;
  n_params: number;
  bic: number;
  labels: number[];
}

export interface BicRow {
  k: number;
  covariance_type: string;
  bic?: number;
  log_likelihood?: number;
  n_params?: number;
  converged?: boolean;
  error?: string;
}

export interface ClusterResponse {
  algo: "kmeans" | "gmm";
  variables: string[];
  labels: number[];
  kmeans?: KMeansPayload;
  elbow?: [number, number][];
  gmm?: GmmPayload;
  bic_table?: BicRow[];
  dbi: number | null;
  pca: { coords: number[][]; explained_variance_ratio: number[] } | null;
}

export interface StatsResponse {
  network_builds: number;
  network_ready: boolean;
  centrality_cache_size: number;
  m: number;
  d: number;
  columns: string[];
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function parseError(res: Response): Promise<never> {
  let detail = `${res.status} ${res.statusText}`;
  try {
    const body = await res.json();
    if (body && typeof body.detail === "string") detail = body.detail;
    else if (body && body.detail) detail = JSON.stringify(body.detail);
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(res.status, detail);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await fetch(this.base + path);
    if (!res.ok) await parseError(res);
    return (await res.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const res = await fetch(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) await parseError(res);
    return (await res.json()) as T;
  }

  async upload(csv: string | Blob): Promise<UploadResponse> {
    const res = await fetch(this.base + "/datasets", {
      method: "POST",
      headers: { "content-type": "text/csv" },
      body: csv,
    });
    if (!res.ok) await parseError(res);
    return (await res.json()) as UploadResponse;
  }

  buildNetwork(
    sid: string,
    method: MethodName,
    params: NetworkParams = {},
    edgeDirection: "child-to-parent" | "parent-to-child" = "child-to-parent",
  ): Promise<NetworkResponse> {
    return this.postJson(`/sessions/${sid}/network`, {
      method,
      params,
      edge_direction: edgeDirection,
    });
  }

  centrality(
    sid: string,
    measure: MeasureName,
    params: Record<string, number> = {},
  ): Promise<CentralityResponse> {
    const query = new URLSearchParams({ measure });
    for (const [key, value] of Object.entries(params)) query.set(key, String(value));
    return this.getJson(`/sessions/${sid}/centrality?${query}`);
  }

  cluster(
    sid: string,
    req: {
      variables: string[];
      algo: "kmeans" | "gmm";
      k?: number;
      seed?: number;
      restarts?: number;
      k_max?: number;
    },
  ): Promise<ClusterResponse> {
    return this.postJson(`/sessions/${sid}/cluster`, req);
  }

  stats(sid: string): Promise<StatsResponse> {
    return this.getJson(`/sessions/${sid}/stats`);
  }

  async samples(): Promise<string[]> {
    const body = await this.getJson<{ samples: string[] }>("/samples");
    return body.samples;
  }

  async sampleBody(name: string): Promise<string> {
    const res = await fetch(this.base + `/samples/${name}`);
    if (!res.ok) await parseError(res);
    return await res.text();
  }
}
