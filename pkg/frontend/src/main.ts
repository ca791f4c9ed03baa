/** Wires controls to the state machine and re-renders views on change. */

import { ALL_MEASURES, ApiClient, MeasureName, MethodName } from "./api.js";
import {
  renderClusterSummary,
  renderElbow,
  renderNetwork,
  renderPreview,
  renderRanking,
  renderScatter,
  showBanner,
} from "./render.js";
import { AppState } from "./state.js";

function byId<T extends Element>(doc: Document, id: string): T {
  const el = doc.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as unknown as T;
}

export interface App {
  state: AppState;
  refresh: () => void;
}

export function initApp(doc: Document, api: ApiClient): App {
  const state = new AppState(api);

  const fileInput = byId<HTMLInputElement>(doc, "file-input");
  const sampleSelect = byId<HTMLSelectElement>(doc, "sample-select");
  const loadSampleBtn = byId<HTMLButtonElement>(doc, "load-sample");
  const preview = byId<HTMLElement>(doc, "data-preview");

  const methodSelect = byId<HTMLSelectElement>(doc, "method-select");
  const buildBtn = byId<HTMLButtonElement>(doc, "build-network");
  const buildInfo = byId<HTMLElement>(doc, "build-info");

  const measureSelect = byId<HTMLSelectElement>(doc, "measure-select");
  const networkSvg = byId<Element>(doc, "network-svg");

  const nSlider = byId<HTMLInputElement>(doc, "n-slider");
  const nValue = byId<HTMLElement>(doc, "n-value");
  const rankingHost = byId<HTMLElement>(doc, "ranking");

  const algoSelect = byId<HTMLSelectElement>(doc, "algo-select");
  const kInput = byId<HTMLInputElement>(doc, "k-input");
  const clusterBtn = byId<HTMLButtonElement>(doc, "run-cluster");
  const clusterSummary = byId<HTMLElement>(doc, "cluster-summary");
  const elbowSvg = byId<Element>(doc, "elbow-svg");
  const scatterSvg = byId<Element>(doc, "scatter-svg");
  const banners = byId<HTMLElement>(doc, "banners");

  for (const measure of ALL_MEASURES) {
    const opt = doc.createElement("option") as HTMLOptionElement;
    opt.value = measure;
    opt.textContent = measure;
    if (measure === state.measure) opt.selected = true;
    measureSelect.appendChild(opt);
  }

  let shownError: string | null = null;

  function refresh(): void {
    const hasSession = state.hasSession;
    const hasNetwork = state.hasNetwork;

    methodSelect.disabled = !hasSession || state.busy("network");
    buildBtn.disabled = !hasSession || state.busy("network");
    measureSelect.disabled = !hasNetwork || state.busy("measure");
    nSlider.disabled = !hasNetwork || !state.centrality;
    algoSelect.disabled = !hasNetwork || !state.centrality || state.busy("cluster");
    kInput.disabled = algoSelect.disabled || state.clusterAlgo !== "kmeans";
    clusterBtn.disabled = algoSelect.disabled;
    fileInput.disabled = state.busy("upload");
    loadSampleBtn.disabled = state.busy("upload");

    if (state.session) renderPreview(doc, preview, state.session);
    if (state.network) {
      renderNetwork(doc, networkSvg, state.network, state.centrality, new Set(state.topNames()));
      buildInfo.textContent = `${state.network.edges.length} edges, built in ${state.network.elapsed_ms.toFixed(0)} ms (build #${state.network.build_count})`;
    }
    if (state.centrality) {
      nSlider.max = String(state.maxN);
      nSlider.value = String(state.n);
      nValue.textContent = String(state.n);
      renderRanking(doc, rankingHost, state.centrality, state.n);
    }
    if (state.lastCluster) {
      renderClusterSummary(doc, clusterSummary, state.lastCluster);
      renderElbow(doc, elbowSvg, state.lastCluster.elbow ?? []);
      renderScatter(doc, scatterSvg, state.lastCluster);
    }
    if (state.lastError && state.lastError !== shownError) {
      shownError = state.lastError;
      showBanner(doc, banners, state.lastError);
    }
    if (!state.lastError) shownError = null;
  }

  state.subscribe(refresh);

  fileInput.addEventListener("change", () => {
    const file = fileInput.files && fileInput.files[0];
    if (file) void state.uploadCsv(file).then((s) => s && setFragment(s.session_id));
  });

  loadSampleBtn.addEventListener("click", () => {
    const name = sampleSelect.value;
    if (!name) return;
    void api
      .sampleBody(name)
      .then((csv) => state.uploadCsv(csv))
      .then((s) => s && setFragment(s.session_id))
      .catch((err) => {
        showBanner(doc, banners, err instanceof Error ? err.message : String(err));
      });
  });

  methodSelect.addEventListener("change", () => {
    state.setMethod(methodSelect.value as MethodName);
  });

  buildBtn.addEventListener("click", () => {
    void state.buildNetwork();
  });

  measureSelect.addEventListener("change", () => {
    void state.setMeasure(measureSelect.value as MeasureName);
  });

  nSlider.addEventListener("input", () => {
    state.setN(Number(nSlider.value));
  });

  algoSelect.addEventListener("change", () => {
    state.setClusterAlgo(algoSelect.value as "kmeans" | "gmm");
  });

  kInput.addEventListener("change", () => {
    state.setK(Number(kInput.value));
  });

  clusterBtn.addEventListener("click", () => {
    void state.runCluster();
  });

  function setFragment(sessionId: string): void {
    const win = doc.defaultView;
    if (win) win.location.hash = `s=${sessionId}`;
  }

  void api
    .samples()
    .then((names) => {
      for (const name of names) {
        const opt = doc.createElement("option") as HTMLOptionElement;
        opt.value = name;
        opt.textContent = name;
        sampleSelect.appendChild(opt);
      }
    })
    .catch(() => {
      /* no data dir configured; file upload still works */
    });

  const win = doc.defaultView;
  const fragment = win ? win.location.hash : "";
  const match = /^#s=([0-9a-f]+)$/.exec(fragment);
  if (match) void state.restore(match[1]);

  refresh();
  return { state, refresh };
}
