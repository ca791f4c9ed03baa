"""Node scoring for directed graphs under nine centrality measures, with a
stable Top-n ranking.

Edge convention throughout: A[i, j] = 1 means an edge i -> j. With the
default child-to-parent networks, a frequently selected predictor therefore
collects in-links, and the in-link-sensitive measures (pagerank, authority,
eigen, alpha) reward it.

The committed formulas, measure by measure:

- degree      total degree, in + out, raw counts.
- pagerank    damped random walk along out-edges; dangling mass spread
              uniformly; power iteration, L1 tolerance 1e-10, cap 1000.
- hub/authority  alternating iteration a <- A^T h, h <- A a (HITS);
              equivalently the principal eigenvectors of A^T A and A A^T;
              each vector rescaled so its maximum is 1.
- eigen       Perron eigenvector of the in-link structure, x ~ A^T x.
              Computed by power iteration accelerated with matrix squaring
              of I + A^T (the +I shift removes periodicity). On a graph
              with no directed cycle the spectral radius is 0 and the
              directed eigenvector degenerates, so the measure falls back
              to the symmetrized graph A + A^T and flags `fallback_used`.
- betweenness directed unweighted shortest-path betweenness, single-source
              dependency accumulation, endpoints excluded, raw counts.
- closeness   out-distance closeness with reachable-set normalization:
              ((r-1)/sum_dist) * ((r-1)/(d-1)) with r = reachable count
              including the node itself; 0 for nodes that reach nothing.
- alpha       Katz-style attenuation along in-links:
              x = (I - a A^T)^-1 1 with a = attenuation / lambda_max.
- power       Bonacich power along out-links:
              c = (I - b A)^-1 A 1 with b = beta / lambda_max, rescaled so
              sum(c^2) = d.

lambda_max is the adjacency spectral radius; it is 0 exactly when the graph
is acyclic, in which case alpha/power substitute 1 so the resolvent stays
well-defined.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from netvars.depnet import DependencyNetwork

MEASURES = (
    "alpha",
    "authority",
    "betweenness",
    "closeness",
    "degree",
    "eigen",
    "hub",
    "pagerank",
    "power",
)

_SQUARINGS = 64


class ConvergenceError(RuntimeError):
    def __init__(self, measure: str, detail: str):
        super().__init__(f"{measure} failed to converge: {detail}")


@dataclass(frozen=True)
class CentralityScores:
    """Per-node scores for one measure plus the stable descending ranking
    (ties broken by ascending original index)."""

    measure: str
    params: dict
    nodes: tuple[str, ...]
    scores: np.ndarray
    ranking: tuple[int, ...]
    fallback_used: bool = False

    def top_names(self, n: int) -> list[str]:
        return [self.nodes[i] for i in self.ranking[:n]]


def _ranked(measure, params, nodes, scores, fallback=False) -> CentralityScores:
    scores = np.asarray(scores, dtype=np.float64)
    if not np.all(np.isfinite(scores)):
        raise ConvergenceError(measure, "non-finite score")
    order = sorted(range(len(nodes)), key=lambda i: (-scores[i], i))
    return CentralityScores(
        measure=measure,
        params=dict(params),
        nodes=tuple(nodes),
        scores=scores,
        ranking=tuple(order),
        fallback_used=fallback,
    )


def _adjacency(g: DependencyNetwork | np.ndarray) -> tuple[np.ndarray, tuple[str, ...]]:
    if isinstance(g, DependencyNetwork):
        return g.adjacency(), g.nodes
    a = np.asarray(g, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("adjacency must be square")
    if a.shape[0] < 1:
        raise ValueError("graph needs at least one node")
    return a, tuple(f"n{i}" for i in range(a.shape[0]))


def has_cycle(a: np.ndarray) -> bool:
    """Kahn's algorithm; True iff the digraph has a directed cycle."""
    d = a.shape[0]
    indeg = (a > 0).sum(axis=0).astype(int)
    queue = deque(i for i in range(d) if indeg[i] == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for v in np.nonzero(a[u] > 0)[0]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return seen < d


def spectral_radius(a: np.ndarray) -> float:
    """Adjacency spectral radius via Gelfand's formula with repeated squaring
    of the max-normalized matrix; exact 0 for acyclic graphs."""
    if not has_cycle(a):
        return 0.0
    m = a.copy()
    log_r = 0.0
    weight = 1.0
    for _ in range(_SQUARINGS):
        norm = m.max()
        log_r += weight * np.log(norm)
        m = m / norm
        m = m @ m
        weight /= 2.0
    return float(np.exp(log_r))


def _dominant_direction(b: np.ndarray, measure: str) -> np.ndarray:
    """Normalized limit of b^(2^k) applied to the ones vector.

    b must be entrywise nonnegative and either symmetric PSD or carry a
    positive diagonal; then repeated squaring with max-normalization
    converges even for defective or nearly tied dominant eigenvalues.
    """
    m = b / b.max()
    for _ in range(_SQUARINGS):
        nxt = m @ m
        top = nxt.max()
        if top <= 0:
            raise ConvergenceError(measure, "matrix power collapsed to zero")
        nxt = nxt / top
        if np.abs(nxt - m).max() < 1e-15:
            m = nxt
            break
        m = nxt
    x = m @ np.ones(b.shape[0])
    peak = x.max()
    if peak <= 0:
        raise ConvergenceError(measure, "zero dominant vector")
    return x / peak


def degree(g) -> CentralityScores:
    a, nodes = _adjacency(g)
    scores = a.sum(axis=1) + a.sum(axis=0)
    return _ranked("degree", {}, nodes, scores)


def pagerank(g, damping: float = 0.85) -> CentralityScores:
    if not (0 < damping < 1):
        raise ValueError("damping must lie in (0,1)")
    a, nodes = _adjacency(g)
    d = a.shape[0]
    out = a.sum(axis=1)
    dangling = out == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        walk = np.where(dangling[:, None], 0.0, a / np.where(out == 0, 1.0, out)[:, None])
    x = np.full(d, 1.0 / d)
    for _ in range(1000):
        nxt = damping * (walk.T @ x + x[dangling].sum() / d) + (1 - damping) / d
        if np.abs(nxt - x).sum() < 1e-10:
            return _ranked("pagerank", {"damping": damping}, nodes, nxt)
        x = nxt
    raise ConvergenceError("pagerank", "cap of 1000 iterations reached")


def hits(g) -> tuple[CentralityScores, CentralityScores]:
    """Returns (hub, authority): the HITS fixed point a ~ A^T h, h ~ A a,
    i.e. the principal directions of A A^T and A^T A reached from the ones
    vector. Both matrices are PSD, so squared power iteration converges to
    machine precision."""
    a, nodes = _adjacency(g)
    d = a.shape[0]
    if a.sum() == 0:
        zero = np.zeros(d)
        return (
            _ranked("hub", {}, nodes, zero),
            _ranked("authority", {}, nodes, zero),
        )
    h = _dominant_direction(a @ a.T, "hub")
    auth = a.T @ h
    peak = auth.max()
    if peak <= 0:
        raise ConvergenceError("authority", "zero authority vector")
    auth = auth / peak
    return (
        _ranked("hub", {}, nodes, h),
        _ranked("authority", {}, nodes, auth),
    )


def hub(g) -> CentralityScores:
    return hits(g)[0]


def authority(g) -> CentralityScores:
    return hits(g)[1]


def eigen(g) -> CentralityScores:
    a, nodes = _adjacency(g)
    d = a.shape[0]
    if a.sum() == 0:
        return _ranked("eigen", {}, nodes, np.zeros(d), fallback=True)
    if has_cycle(a):
        x = _dominant_direction(np.eye(d) + a.T, "eigen")
        return _ranked("eigen", {}, nodes, x)
    # acyclic: the directed spectrum is nilpotent, use the symmetrized graph
    sym = a + a.T
    x = _dominant_direction(np.eye(d) + sym, "eigen")
    return _ranked("eigen", {}, nodes, x, fallback=True)


def _single_source_counts(a: np.ndarray, s: int):
    """BFS from s: returns (order, predecessors, path counts, distances)."""
    d = a.shape[0]
    dist = np.full(d, -1)
    sigma = np.zeros(d)
    preds: list[list[int]] = [[] for _ in range(d)]
    dist[s] = 0
    sigma[s] = 1.0
    order = []
    queue = deque([s])
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in np.nonzero(a[u] > 0)[0]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
            if dist[v] == dist[u] + 1:
                sigma[v] += sigma[u]
                preds[v].append(u)
    return order, preds, sigma, dist


def betweenness(g) -> CentralityScores:
    a, nodes = _adjacency(g)
    d = a.shape[0]
    bc = np.zeros(d)
    for s in range(d):
        order, preds, sigma, _ = _single_source_counts(a, s)
        delta = np.zeros(d)
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return _ranked("betweenness", {}, nodes, bc)


def closeness(g) -> CentralityScores:
    a, nodes = _adjacency(g)
    d = a.shape[0]
    scores = np.zeros(d)
    for u in range(d):
        _, _, _, dist = _single_source_counts(a, u)
        reachable = dist >= 0
        r = int(reachable.sum())  # includes u itself
        if r <= 1 or d <= 1:
            continue
        total = float(dist[reachable].sum())
        scores[u] = ((r - 1) / total) * ((r - 1) / (d - 1))
    return _ranked("closeness", {}, nodes, scores)


def _lambda_for_attenuation(a: np.ndarray) -> float:
    r = spectral_radius(a)
    return r if r > 0 else 1.0


def alpha(g, attenuation: float = 0.85) -> CentralityScores:
    if attenuation <= 0:
        raise ValueError("attenuation must be positive")
    a, nodes = _adjacency(g)
    d = a.shape[0]
    factor = attenuation / _lambda_for_attenuation(a)
    try:
        x = np.linalg.solve(np.eye(d) - factor * a.T, np.ones(d))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError("alpha", f"singular system: {exc}") from exc
    return _ranked("alpha", {"attenuation": attenuation}, nodes, x)


def power(g, beta: float = 0.85) -> CentralityScores:
    a, nodes = _adjacency(g)
    d = a.shape[0]
    factor = beta / _lambda_for_attenuation(a)
    try:
        c = np.linalg.solve(np.eye(d) - factor * a, a @ np.ones(d))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError("power", f"singular system: {exc}") from exc
    ssq = float(c @ c)
    if ssq > 0:
        c = c * np.sqrt(d / ssq)
    return _ranked("power", {"beta": beta}, nodes, c)


_DISPATCH = {
    "alpha": alpha,
    "authority": authority,
    "betweenness": betweenness,
    "closeness": closeness,
    "degree": degree,
    "eigen": eigen,
    "hub": hub,
    "pagerank": pagerank,
    "power": power,
}

_MEASURE_PARAMS = {"alpha": "attenuation", "pagerank": "damping", "power": "beta"}


def compute_centrality(g, measure: str, **params) -> CentralityScores:
    """Score the graph's nodes under `measure`; extra keyword parameters are
    the measure-specific knobs (damping, attenuation, beta)."""
    key = measure.lower()
    if key not in _DISPATCH:
        raise ValueError(f"unknown measure '{measure}', expected one of {MEASURES}")
    allowed = _MEASURE_PARAMS.get(key)
    for name in params:
        if name != allowed:
            raise ValueError(f"measure '{key}' does not take parameter '{name}'")
    return _DISPATCH[key](g, **params)


def rank_top_n(s: CentralityScores, n: int) -> list[str]:
    """First n names of the stable ranking."""
    if not (1 <= n <= len(s.nodes)):
        raise ValueError(f"n must lie in [1, {len(s.nodes)}]")
    return s.top_names(n)


def scores_to_json(s: CentralityScores) -> dict:
    return {
        "measure": s.measure,
        "params": s.params,
        "scores": {name: float(v) for name, v in zip(s.nodes, s.scores)},
        "ranking": [s.nodes[i] for i in s.ranking],
        "fallback_used": s.fallback_used,
    }
