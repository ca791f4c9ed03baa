/** DOM and SVG view builders. Every number shown comes verbatim from a
 * server payload; formatting is display-only. */

import { CentralityResponse, ClusterResponse, NetworkResponse, UploadResponse } from "./api.js";
import { forceLayout } from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const PALETTE = [
  "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

function clear(el: Element): void {
  while (el.firstChild) el.removeChild(el.firstChild);
}

function fmt(v: number): string {
  if (Number.isInteger(v)) return String(v);
  return v.toPrecision(6);
}

export function renderPreview(doc: Document, host: Element, session: UploadResponse): void {
  clear(host);
  const info = doc.createElement("p");
  info.className = "muted";
  info.textContent = `${session.m} rows x ${session.d} numeric columns`;
  host.appendChild(info);
  if (session.warnings.length) {
    const warn = doc.createElement("p");
    warn.className = "warnings";
    warn.textContent = session.warnings.join("; ");
    host.appendChild(warn);
  }
  const list = doc.createElement("div");
  list.className = "chip-row";
  for (const col of session.columns) {
    const chip = doc.createElement("span");
    chip.className = "chip";
    chip.textContent = col;
    list.appendChild(chip);
  }
  host.appendChild(list);
}

export function renderNetwork(
  doc: Document,
  svg: Element,
  network: NetworkResponse,
  centrality: CentralityResponse | null,
  topSet: Set<string>,
): void {
  clear(svg);
  const width = 640;
  const height = 420;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  const layout = forceLayout(network.nodes, network.edges, width, height);

  const maxScore = centrality
    ? Math.max(...Object.values(centrality.scores), 1e-12)
    : 1;

  for (const [src, dst] of network.edges) {
    const a = layout.get(src);
    const b = layout.get(dst);
    if (!a || !b) continue;
    const line = doc.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", a.x.toFixed(1));
    line.setAttribute("y1", a.y.toFixed(1));
    line.setAttribute("x2", b.x.toFixed(1));
    line.setAttribute("y2", b.y.toFixed(1));
    line.setAttribute("class", "edge");
    svg.appendChild(line);
  }
  for (const name of network.nodes) {
    const p = layout.get(name)!;
    const score = centrality ? centrality.scores[name] ?? 0 : 0;
    const radius = 5 + 11 * (maxScore > 0 ? Math.max(score, 0) / maxScore : 0);
    const group = doc.createElementNS(SVG_NS, "g");
    const circle = doc.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", p.x.toFixed(1));
    circle.setAttribute("cy", p.y.toFixed(1));
    circle.setAttribute("r", radius.toFixed(2));
    circle.setAttribute("class", topSet.has(name) ? "node top" : "node");
    circle.setAttribute("data-name", name);
    circle.setAttribute("data-score", centrality ? String(score) : "");
    const title = doc.createElementNS(SVG_NS, "title");
    title.textContent = centrality ? `${name}: ${score}` : name;
    circle.appendChild(title);
    const label = doc.createElementNS(SVG_NS, "text");
    label.setAttribute("x", p.x.toFixed(1));
    label.setAttribute("y", (p.y - radius - 3).toFixed(1));
    label.setAttribute("class", "node-label");
    label.textContent = name;
    group.appendChild(circle);
    group.appendChild(label);
    svg.appendChild(group);
  }
}

export function renderRanking(
  doc: Document,
  host: Element,
  centrality: CentralityResponse,
  n: number,
): void {
  clear(host);
  if (centrality.fallback_used) {
    const note = doc.createElement("p");
    note.className = "warnings";
    note.textContent = "degenerate directed spectrum: scores use the symmetrized graph";
    host.appendChild(note);
  }
  const table = doc.createElement("table");
  const head = doc.createElement("tr");
  for (const text of ["#", "variable", `${centrality.measure} score`]) {
    const th = doc.createElement("th");
    th.textContent = text;
    head.appendChild(th);
  }
  table.appendChild(head);
  centrality.ranking.slice(0, n).forEach((name, i) => {
    const tr = doc.createElement("tr");
    tr.className = "rank-row";
    const rank = doc.createElement("td");
    rank.textContent = String(i + 1);
    const label = doc.createElement("td");
    label.textContent = name;
    const score = doc.createElement("td");
    score.textContent = fmt(centrality.scores[name]);
    tr.appendChild(rank);
    tr.appendChild(label);
    tr.appendChild(score);
    table.appendChild(tr);
  });
  host.appendChild(table);
}

function polyline(doc: Document, points: [number, number][], cls: string): Element {
  const el = doc.createElementNS(SVG_NS, "polyline");
  el.setAttribute("points", points.map(([x, y]) => `${x.toFixed(1)},${y.toFixed(1)}`).join(" "));
  el.setAttribute("class", cls);
  el.setAttribute("fill", "none");
  return el;
}

export function renderElbow(doc: Document, svg: Element, elbow: [number, number][]): void {
  clear(svg);
  const width = 300;
  const height = 180;
  const pad = 28;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  if (!elbow.length) return;
  const maxW = Math.max(...elbow.map(([, w]) => w), 1e-12);
  const ks = elbow.map(([k]) => k);
  const kMin = Math.min(...ks);
  const kMax = Math.max(...ks);
  const sx = (k: number) =>
    pad + ((k - kMin) / Math.max(kMax - kMin, 1)) * (width - 2 * pad);
  const sy = (w: number) => height - pad - (w / maxW) * (height - 2 * pad);
  svg.appendChild(polyline(doc, elbow.map(([k, w]) => [sx(k), sy(w)]), "elbow-line"));
  for (const [k, w] of elbow) {
    const dot = doc.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", sx(k).toFixed(1));
    dot.setAttribute("cy", sy(w).toFixed(1));
    dot.setAttribute("r", "3");
    dot.setAttribute("class", "elbow-dot");
    const title = doc.createElementNS(SVG_NS, "title");
    title.textContent = `k=${k}: ${w}`;
    dot.appendChild(title);
    svg.appendChild(dot);
    const label = doc.createElementNS(SVG_NS, "text");
    label.setAttribute("x", sx(k).toFixed(1));
    label.setAttribute("y", String(height - 8));
    label.setAttribute("class", "axis-label");
    label.textContent = String(k);
    svg.appendChild(label);
  }
}

export function renderScatter(doc: Document, svg: Element, cluster: ClusterResponse): void {
  clear(svg);
  const width = 340;
  const height = 300;
  const pad = 16;
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  if (!cluster.pca) {
    const note = doc.createElementNS(SVG_NS, "text");
    note.setAttribute("x", "10");
    note.setAttribute("y", "20");
    note.textContent = "need at least 2 variables for a projection";
    svg.appendChild(note);
    return;
  }
  const coords = cluster.pca.coords;
  const xs = coords.map((c) => c[0]);
  const ys = coords.map((c) => c[1]);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const sx = (x: number) => pad + ((x - xMin) / Math.max(xMax - xMin, 1e-12)) * (width - 2 * pad);
  const sy = (y: number) => height - pad - ((y - yMin) / Math.max(yMax - yMin, 1e-12)) * (height - 2 * pad);
  coords.forEach((point, i) => {
    const dot = doc.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", sx(point[0]).toFixed(1));
    dot.setAttribute("cy", sy(point[1]).toFixed(1));
    dot.setAttribute("r", "3");
    dot.setAttribute("fill", PALETTE[cluster.labels[i] % PALETTE.length]);
    dot.setAttribute("class", "scatter-dot");
    dot.setAttribute("data-label", String(cluster.labels[i]));
    svg.appendChild(dot);
  });
}

export function renderClusterSummary(doc: Document, host: Element, cluster: ClusterResponse): void {
  clear(host);
  const lines: string[] = [];
  if (cluster.algo === "kmeans" && cluster.kmeans) {
    lines.push(`k-means, k=${cluster.kmeans.k}, wcss=${fmt(cluster.kmeans.wcss)}`);
  }
  if (cluster.algo === "gmm" && cluster.gmm) {
    lines.push(
      `mixture: best k=${cluster.gmm.k} (${cluster.gmm.covariance_type}), BIC=${fmt(cluster.gmm.bic)}`,
    );
  }
  if (cluster.dbi !== null) lines.push(`Davies-Bouldin: ${fmt(cluster.dbi)}`);
  if (cluster.pca) {
    lines.push(
      `explained variance: ${cluster.pca.explained_variance_ratio.map(fmt).join(", ")}`,
    );
  }
  for (const text of lines) {
    const p = doc.createElement("p");
    p.textContent = text;
    host.appendChild(p);
  }
  if (cluster.bic_table) {
    const table = doc.createElement("table");
    const head = doc.createElement("tr");
    for (const text of ["k", "family", "BIC"]) {
      const th = doc.createElement("th");
      th.textContent = text;
      head.appendChild(th);
    }
    table.appendChild(head);
    for (const row of cluster.bic_table) {
      const tr = doc.createElement("tr");
      const cells = [String(row.k), row.covariance_type, row.error ? `failed: ${row.error}` : fmt(row.bic!)];
      for (const text of cells) {
        const td = doc.createElement("td");
        td.textContent = text;
        tr.appendChild(td);
      }
      table.appendChild(tr);
    }
    host.appendChild(table);
  }
}

export function showBanner(doc: Document, host: Element, text: string): void {
  const banner = doc.createElement("div");
  banner.className = "banner";
  const span = doc.createElement("span");
  span.textContent = text;
  const close = doc.createElement("button");
  close.textContent = "x";
  close.className = "banner-close";
  close.addEventListener("click", () => banner.remove());
  banner.appendChild(span);
  banner.appendChild(close);
  host.appendChild(banner);
}
