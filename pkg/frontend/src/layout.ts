/** Deterministic force-directed layout. Presentation only: the coordinates
 * never feed back into any analysis. */

export interface Point {
  x: number;
  y: number;
}

/** Small seeded LCG so layouts are stable across renders. */
function lcg(seed: number): () => number {
  let state = seed >>> 0 || 1;
  return () => {
    state = (state * 1664525 + 1013904223) >>> 0;
    return state / 4294967296;
  };
}

export function forceLayout(
  nodes: string[],
  edges: [string, string][],
  width: number,
  height: number,
  iterations = 250,
  seed = 42,
): Map<string, Point> {
  const n = nodes.length;
  const index = new Map(nodes.map((name, i) => [name, i]));
  const rand = lcg(seed);
  const px = new Float64Array(n);
  const py = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    px[i] = width * (0.2 + 0.6 * rand());
    py[i] = height * (0.2 + 0.6 * rand());
  }
  if (n <= 1) {
    const out = new Map<string, Point>();
    if (n === 1) out.set(nodes[0], { x: width / 2, y: height / 2 });
    return out;
  }

  const links: [number, number][] = [];
  for (const [a, b] of edges) {
    const i = index.get(a);
    const j = index.get(b);
    if (i !== undefined && j !== undefined && i !== j) links.push([i, j]);
  }

  const area = width * height;
  const ideal = Math.sqrt(area / n) * 0.8;
  const fx = new Float64Array(n);
  const fy = new Float64Array(n);
  for (let iter = 0; iter < iterations; iter++) {
    const temperature = 0.1 * Math.min(width, height) * (1 - iter / iterations) + 1;
    fx.fill(0);
    fy.fill(0);
    // pairwise repulsion
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let dx = px[i] - px[j];
        let dy = py[i] - py[j];
        let dist2 = dx * dx + dy * dy;
        if (dist2 < 1e-6) {
          dx = (rand() - 0.5) * 0.01;
          dy = (rand() - 0.5) * 0.01;
          dist2 = dx * dx + dy * dy;
        }
        const dist = Math.sqrt(dist2);
        const force = (ideal * ideal) / dist;
        fx[i] += (dx / dist) * force;
        fy[i] += (dy / dist) * force;
        fx[j] -= (dx / dist) * force;
        fy[j] -= (dy / dist) * force;
      }
    }
    // spring attraction along edges
    for (const [i, j] of links) {
      const dx = px[i] - px[j];
      const dy = py[i] - py[j];
      const dist = Math.sqrt(dx * dx + dy * dy) || 1e-3;
      const force = (dist * dist) / ideal;
      fx[i] -= (dx / dist) * force;
      fy[i] -= (dy / dist) * force;
      fx[j] += (dx / dist) * force;
      fy[j] += (dy / dist) * force;
    }
    // gentle centering
    for (let i = 0; i < n; i++) {
      fx[i] += (width / 2 - px[i]) * 0.02;
      fy[i] += (height / 2 - py[i]) * 0.02;
    }
    for (let i = 0; i < n; i++) {
      const mag = Math.sqrt(fx[i] * fx[i] + fy[i] * fy[i]) || 1e-9;
      const step = Math.min(mag, temperature);
      px[i] += (fx[i] / mag) * step;
      py[i] += (fy[i] / mag) * step;
      px[i] = Math.max(10, Math.min(width - 10, px[i]));
      py[i] = Math.max(10, Math.min(height - 10, py[i]));
    }
  }

  const out = new Map<string, Point>();
  nodes.forEach((name, i) => out.set(name, { x: px[i], y: py[i] }));
  return out;
}
