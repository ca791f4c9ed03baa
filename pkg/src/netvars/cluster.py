"""Clustering of the reduced table: k-means with elbow diagnostics, and
Gaussian-mixture EM with BIC model selection over three covariance families."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from netvars.depnet import resolve_workers
from netvars.ingest import DataTable

COVARIANCE_TYPES = ("spherical", "diagonal", "full")


@dataclass(frozen=True)
class KMeansResult:
    k: int
    labels: np.ndarray
    centroids: np.ndarray
    wcss: float
    iterations: int
    seed: int
    wcss_history: tuple[float, ...] = ()


@dataclass(frozen=True)
class GmmResult:
    k: int
    covariance_type: str
    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray  # k x n x n, stored full regardless of family
    log_likelihood: float
    n_params: int
    bic: float
    labels: np.ndarray
    converged: bool
    loglik_history: tuple[float, ...] = ()


@dataclass
class GmmSelection:
    best: GmmResult
    table: list[dict] = field(default_factory=list)


def _pairwise_sq(x: np.ndarray, c: np.ndarray) -> np.ndarray:
    d2 = (x * x).sum(axis=1)[:, None] + (c * c).sum(axis=1)[None, :] - 2.0 * (x @ c.T)
    return np.maximum(d2, 0.0)


def _seed_centroids(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Distance-weighted (kmeans++-style) seeding."""
    m = x.shape[0]
    centers = [x[rng.integers(m)]]
    for _ in range(1, k):
        d2 = _pairwise_sq(x, np.asarray(centers)).min(axis=1)
        total = d2.sum()
        if total <= 0:
            centers.append(x[rng.integers(m)])
            continue
        probs = np.cumsum(d2 / total)
        centers.append(x[int(np.searchsorted(probs, rng.random()))])
    return np.asarray(centers, dtype=np.float64)


def _lloyd(x: np.ndarray, centroids: np.ndarray, max_iter: int):
    m, k = x.shape[0], centroids.shape[0]
    labels = np.full(m, -1)
    history: list[float] = []
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        d2 = _pairwise_sq(x, centroids)
        new_labels = d2.argmin(axis=1)
        # repair empty clusters with the point farthest from its centroid
        counts = np.bincount(new_labels, minlength=k)
        for c in np.nonzero(counts == 0)[0]:
            dist_own = d2[np.arange(m), new_labels]
            far = int(dist_own.argmax())
            new_labels[far] = c
            centroids[c] = x[far]
            d2 = _pairwise_sq(x, centroids)
            dist_own = d2[np.arange(m), new_labels]
            counts = np.bincount(new_labels, minlength=k)
        history.append(float(d2[np.arange(m), new_labels].sum()))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            mask = labels == c
            if mask.any():
                centroids[c] = x[mask].mean(axis=0)
    # final consistent state: centroids are the means of the final labels
    for c in range(k):
        mask = labels == c
        if mask.any():
            centroids[c] = x[mask].mean(axis=0)
    wcss = float(((x - centroids[labels]) ** 2).sum())
    return labels, centroids, wcss, iterations, history


def kmeans(
    s: DataTable | np.ndarray,
    k: int,
    restarts: int = 5,
    max_iter: int = 300,
    seed: int = 0,
) -> KMeansResult:
    """Best-of-`restarts` Lloyd runs from distance-weighted seeding."""
    x = s.values if isinstance(s, DataTable) else np.asarray(s, dtype=np.float64)
    m = x.shape[0]
    if not (1 <= k <= m):
        raise ValueError(f"k must lie in [1, {m}]")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    best: KMeansResult | None = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        centroids = _seed_centroids(x, k, rng)
        labels, centroids, wcss, iters, history = _lloyd(x, centroids.copy(), max_iter)
        if best is None or wcss < best.wcss:
            best = KMeansResult(
                k=k, labels=labels, centroids=centroids, wcss=wcss,
                iterations=iters, seed=seed, wcss_history=tuple(history),
            )
    assert best is not None
    return best


def elbow_curve(
    s: DataTable | np.ndarray,
    k_min: int,
    k_max: int,
    restarts: int = 5,
    seed: int = 0,
) -> list[tuple[int, float]]:
    """Best WCSS per k over [k_min, k_max]."""
    x = s.values if isinstance(s, DataTable) else np.asarray(s, dtype=np.float64)
    if not (1 <= k_min <= k_max <= x.shape[0]):
        raise ValueError(f"need 1 <= k_min <= k_max <= {x.shape[0]}")
    return [(k, kmeans(x, k, restarts=restarts, seed=seed).wcss) for k in range(k_min, k_max + 1)]


def _cov_param_count(cov_type: str, n: int) -> int:
    if cov_type == "spherical":
        return 1
    if cov_type == "diagonal":
        return n
    return n * (n + 1) // 2


def _log_gaussian(x: np.ndarray, mean: np.ndarray, cov: np.ndarray) -> np.ndarray:
    n = x.shape[1]
    chol = np.linalg.cholesky(cov)
    diff = x - mean
    sol = np.linalg.solve(chol, diff.T)
    maha = (sol * sol).sum(axis=0)
    logdet = 2.0 * np.log(np.diag(chol)).sum()
    return -0.5 * (n * math.log(2 * math.pi) + logdet + maha)


def _m_step_covs(
    x: np.ndarray, resp: np.ndarray, means: np.ndarray, cov_type: str, ridge: float
) -> np.ndarray:
    m, n = x.shape
    k = means.shape[0]
    nc = resp.sum(axis=0)
    covs = np.empty((k, n, n))
    for c in range(k):
        diff = x - means[c]
        weighted = diff * resp[:, c][:, None]
        full = (weighted.T @ diff) / nc[c]
        if cov_type == "full":
            covs[c] = full + ridge * np.eye(n)
        elif cov_type == "diagonal":
            covs[c] = np.diag(np.diag(full) + ridge)
        else:
            covs[c] = (float(np.diag(full).mean()) + ridge) * np.eye(n)
    return covs


def gmm_em(
    s: DataTable | np.ndarray,
    k: int,
    covariance_type: str = "full",
    seed: int = 0,
    max_iter: int = 500,
    tol: float = 1e-7,
) -> GmmResult:
    """EM for a k-component Gaussian mixture from a k-means start.

    A ridge of 1e-6 times the average data variance is added to every
    covariance at each M-step; the log-likelihood is non-decreasing across
    iterations. BIC uses the maximize-me convention
    2*loglik - n_params*ln(m).
    """
    x = s.values if isinstance(s, DataTable) else np.asarray(s, dtype=np.float64)
    m, n = x.shape
    if covariance_type not in COVARIANCE_TYPES:
        raise ValueError(f"covariance_type must be one of {COVARIANCE_TYPES}")
    if not (1 <= k <= m):
        raise ValueError(f"k must lie in [1, {m}]")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if covariance_type == "full" and m <= n:
        raise ValueError("full covariance needs more rows than columns")
    ridge = 1e-6 * max(float(x.var(axis=0).mean()), 1e-12)

    start = kmeans(x, k, restarts=3, seed=seed)
    resp = np.zeros((m, k))
    resp[np.arange(m), start.labels] = 1.0
    weights = resp.sum(axis=0) / m
    means = start.centroids.copy()
    covs = _m_step_covs(x, resp, means, covariance_type, ridge)

    history: list[float] = []
    converged = False
    log_resp = None
    for _ in range(max_iter):
        # E step
        log_prob = np.empty((m, k))
        for c in range(k):
            try:
                log_prob[:, c] = math.log(max(weights[c], 1e-300)) + _log_gaussian(
                    x, means[c], covs[c]
                )
            except np.linalg.LinAlgError as exc:
                raise RuntimeError(
                    f"singular covariance in component {c} despite ridge"
                ) from exc
        norm = logsumexp(log_prob, axis=1)
        loglik = float(norm.sum())
        history.append(loglik)
        log_resp = log_prob - norm[:, None]
        if len(history) > 1 and abs(history[-1] - history[-2]) < tol:
            converged = True
            break
        # M step
        resp = np.exp(log_resp)
        nc = resp.sum(axis=0) + 1e-300
        weights = nc / nc.sum()
        means = (resp.T @ x) / nc[:, None]
        covs = _m_step_covs(x, resp, means, covariance_type, ridge)

    labels = np.asarray(log_resp).argmax(axis=1)
    n_params = (k - 1) + k * n + k * _cov_param_count(covariance_type, n)
    loglik = history[-1]
    bic = 2.0 * loglik - n_params * math.log(m)
    return GmmResult(
        k=k,
        covariance_type=covariance_type,
        weights=weights,
        means=means,
        covariances=covs,
        log_likelihood=loglik,
        n_params=n_params,
        bic=bic,
        labels=labels,
        converged=converged,
        loglik_history=tuple(history),
    )


def select_gmm(
    s: DataTable | np.ndarray,
    k_max: int = 9,
    types: tuple[str, ...] = COVARIANCE_TYPES,
    seed: int = 0,
    workers: int | None = None,
) -> GmmSelection:
    """Fit every (k in 1..k_max) x covariance-family combination concurrently
    and keep the maximum-BIC model; the full fit table is retained."""
    x = s.values if isinstance(s, DataTable) else np.asarray(s, dtype=np.float64)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    combos = [(k, t) for t in types for k in range(1, k_max + 1)]

    def run(combo):
        k, t = combo
        return gmm_em(x, k, covariance_type=t, seed=seed)

    results: dict[tuple[int, str], GmmResult | Exception] = {}
    n_workers = resolve_workers(workers, len(combos))
    if n_workers == 1:
        for combo in combos:
            try:
                results[combo] = run(combo)
            except Exception as exc:
                results[combo] = exc
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            futures = {combo: pool.submit(run, combo) for combo in combos}
            for combo, fut in futures.items():
                try:
                    results[combo] = fut.result()
                except Exception as exc:
                    results[combo] = exc

    table = []
    best: GmmResult | None = None
    for combo in combos:
        res = results[combo]
        k, t = combo
        if isinstance(res, Exception):
            table.append({"k": k, "covariance_type": t, "error": str(res)})
            continue
        table.append(
            {
                "k": k,
                "covariance_type": t,
                "bic": res.bic,
                "log_likelihood": res.log_likelihood,
                "n_params": res.n_params,
                "converged": res.converged,
            }
        )
        if best is None or res.bic > best.bic:
            best = res
    if best is None:
        raise RuntimeError("every mixture fit failed")
    return GmmSelection(best=best, table=table)


def kmeans_to_json(r: KMeansResult) -> dict:
    return {
        "k": r.k,
        "labels": r.labels.tolist(),
        "centroids": r.centroids.tolist(),
        "wcss": r.wcss,
        "iterations": r.iterations,
        "seed": r.seed,
    }


def gmm_to_json(r: GmmResult) -> dict:
    return {
        "k": r.k,
        "covariance_type": r.covariance_type,
        "weights": r.weights.tolist(),
        "means": r.means.tolist(),
        "covariances": r.covariances.tolist(),
        "log_likelihood": r.log_likelihood,
        "n_params": r.n_params,
        "bic": r.bic,
        "labels": r.labels.tolist(),
        "converged": r.converged,
    }
