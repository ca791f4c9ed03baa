/** Client-side application state.
 *
 * Controls stay disabled until their prerequisite server state exists:
 * nothing before an upload, no centrality or Top-n before a network build.
 * Measure switches and the n slider never trigger a rebuild; centrality
 * responses are cached per (measure, params) and n slices the cached
 * ranking locally. One request in flight per control group.
 */

import {
  ApiClient,
  CentralityResponse,
  ClusterResponse,
  MeasureName,
  MethodName,
  NetworkParams,
  NetworkResponse,
  UploadResponse,
} from "./api.js";

export type Listener = () => void;

const MEASURE_DEFAULTS: Record<string, Record<string, number>> = {
  pagerank: { damping: 0.85 },
  alpha: { attenuation: 0.85 },
  power: { beta: 0.85 },
};

export class AppState {
  session: UploadResponse | null = null;
  method: MethodName = "stepwise";
  methodParams: NetworkParams = {};
  measure: MeasureName = "alpha";
  n = 5;
  clusterAlgo: "kmeans" | "gmm" = "kmeans";
  k = 3;
  seed = 0;

  network: NetworkResponse | null = null;
  centrality: CentralityResponse | null = null;
  lastCluster: ClusterResponse | null = null;
  lastError: string | null = null;

  private readonly cache = new Map<string, CentralityResponse>();
  private readonly inFlight = new Set<string>();
  private readonly listeners: Listener[] = [];

  constructor(public readonly api: ApiClient) {}

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  busy(group: string): boolean {
    return this.inFlight.has(group);
  }

  get hasSession(): boolean {
    return this.session !== null;
  }

  get hasNetwork(): boolean {
    return this.network !== null;
  }

  get maxN(): number {
    return this.session ? this.session.d : 1;
  }

  /** Ranked names under the current measure, cut to n; pure client slice. */
  topNames(): string[] {
    if (!this.centrality) return [];
    return this.centrality.ranking.slice(0, this.n);
  }

  centralityCacheSize(): number {
    return this.cache.size;
  }

  private async guarded<T>(group: string, task: () => Promise<T>): Promise<T | null> {
    if (this.inFlight.has(group)) return null; // one in-flight per control
    this.inFlight.add(group);
    this.lastError = null;
    this.emit();
    try {
      return await task();
    } catch (err) {
      this.lastError = err instanceof Error ? err.message : String(err);
      return null;
    } finally {
      this.inFlight.delete(group);
      this.emit();
    }
  }

  async uploadCsv(csv: string | Blob): Promise<UploadResponse | null> {
    return this.guarded("upload", async () => {
      const session = await this.api.upload(csv);
      this.session = session;
      this.network = null;
      this.centrality = null;
      this.lastCluster = null;
      this.cache.clear();
      this.n = Math.min(5, session.d);
      return session;
    });
  }

  setMethod(method: MethodName): void {
    this.method = method;
    this.emit();
  }

  async buildNetwork(): Promise<NetworkResponse | null> {
    if (!this.session) return null;
    const sid = this.session.session_id;
    return this.guarded("network", async () => {
      const network = await this.api.buildNetwork(sid, this.method, this.methodParams);
      this.network = network;
      this.cache.clear();
      this.centrality = null;
      this.lastCluster = null;
      // fetch scores for the current measure so the graph renders sized nodes
      const scores = await this.fetchCentrality(this.measure);
      this.centrality = scores;
      return network;
    });
  }

  private cacheKey(measure: MeasureName): string {
    const params = MEASURE_DEFAULTS[measure] ?? {};
    return measure + JSON.stringify(params);
  }

  private async fetchCentrality(measure: MeasureName): Promise<CentralityResponse> {
    const key = this.cacheKey(measure);
    const hit = this.cache.get(key);
    if (hit) return hit;
    const sid = this.session!.session_id;
    const scores = await this.api.centrality(sid, measure, MEASURE_DEFAULTS[measure] ?? {});
    this.cache.set(key, scores);
    return scores;
  }

  /** Measure switch: served from cache or one centrality GET, never a build. */
  async setMeasure(measure: MeasureName): Promise<void> {
    this.measure = measure;
    if (!this.network) {
      this.emit();
      return;
    }
    await this.guarded("measure", async () => {
      this.centrality = await this.fetchCentrality(measure);
      return this.centrality;
    });
  }

  setN(n: number): void {
    this.n = Math.max(1, Math.min(this.maxN, Math.round(n)));
    this.emit();
  }

  setClusterAlgo(algo: "kmeans" | "gmm"): void {
    this.clusterAlgo = algo;
    this.emit();
  }

  setK(k: number): void {
    this.k = Math.max(1, Math.round(k));
    this.emit();
  }

  async runCluster(): Promise<ClusterResponse | null> {
    if (!this.session || !this.centrality) return null;
    const variables = this.topNames();
    const sid = this.session.session_id;
    return this.guarded("cluster", async () => {
      const req = {
        variables,
        algo: this.clusterAlgo,
        seed: this.seed,
        ...(this.clusterAlgo === "kmeans" ? { k: this.k } : { k_max: 9 }),
      };
      const res = await this.api.cluster(sid, req);
      this.lastCluster = res;
      return res;
    });
  }

  /** Re-enter a session after a reload (the id travels in the URL fragment). */
  async restore(sessionId: string): Promise<boolean> {
    const ok = await this.guarded("upload", async () => {
      const stats = await this.api.stats(sessionId);
      this.session = {
        session_id: sessionId,
        columns: stats.columns,
        m: stats.m,
        d: stats.d,
        warnings: [],
      };
      this.network = null;
      this.centrality = null;
      this.cache.clear();
      this.n = Math.min(5, stats.d);
      return true;
    });
    return ok === true;
  }
}
