"""Clustering evaluation indices and the 2-D projection used for plots."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from netvars.ingest import DataTable


@dataclass(frozen=True)
class Partition:
    """Dense cluster labels in [0, k)."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 1:
            raise ValueError("labels must be a vector")
        if labels.size and (labels.min() < 0 or set(np.unique(labels)) != set(range(self.k))):
            raise ValueError("labels must be dense in [0, k)")

    @property
    def k(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0


def davies_bouldin(s: DataTable | np.ndarray, p: Partition) -> float:
    """Mean over clusters of the worst (sigma_i + sigma_j) / d(c_i, c_j) ratio,
    sigma = mean Euclidean distance to the own centroid. Lower is better."""
    x = s.values if isinstance(s, DataTable) else np.asarray(s, dtype=np.float64)
    k = p.k
    if k < 2:
        raise ValueError("Davies-Bouldin needs at least 2 clusters")
    if x.shape[0] != p.labels.shape[0]:
        raise ValueError("labels length does not match row count")
    centroids = np.empty((k, x.shape[1]))
    sigma = np.empty(k)
    for c in range(k):
        mask = p.labels == c
        if not mask.any():
            raise ValueError(f"cluster {c} is empty")
        centroids[c] = x[mask].mean(axis=0)
        sigma[c] = float(np.linalg.norm(x[mask] - centroids[c], axis=1).mean())
    total = 0.0
    for i in range(k):
        worst = 0.0
        for j in range(k):
            if i == j:
                continue
            dist = float(np.linalg.norm(centroids[i] - centroids[j]))
            if dist == 0.0:
                raise ValueError(f"coincident centroids for clusters {i} and {j}")
            worst = max(worst, (sigma[i] + sigma[j]) / dist)
        total += worst
    return total / k


def adjusted_rand(a: Partition, b: Partition) -> float:
    """Chance-corrected pair-counting agreement between two partitions."""
    if a.labels.shape[0] != b.labels.shape[0]:
        raise ValueError("partitions must have equal length")
    m = a.labels.shape[0]
    contingency = np.zeros((a.k, b.k), dtype=np.int64)
    np.add.at(contingency, (a.labels, b.labels), 1)
    sum_ij = sum(comb(int(v), 2) for v in contingency.ravel())
    sum_a = sum(comb(int(v), 2) for v in contingency.sum(axis=1))
    sum_b = sum(comb(int(v), 2) for v in contingency.sum(axis=0))
    pairs = comb(m, 2)
    expected = sum_a * sum_b / pairs if pairs else 0.0
    denom = 0.5 * (sum_a + sum_b) - expected
    if denom == 0:
        return 1.0  # both partitions degenerate and identical in pair structure
    return float((sum_ij - expected) / denom)


def pca_project(s: DataTable | np.ndarray, dims: int = 2):
    """Project onto the top principal components of the correlation matrix.

    Columns are standardized internally; the sign of each component is fixed
    so its largest-magnitude loading is positive. Returns (coordinates,
    explained variance ratios).
    """
    x = s.values if isinstance(s, DataTable) else np.asarray(s, dtype=np.float64)
    m, d = x.shape
    if d < dims:
        raise ValueError(f"need at least {dims} columns")
    stds = x.std(axis=0)
    if np.any(stds <= 0):
        raise ValueError("constant column cannot be standardized for projection")
    z = (x - x.mean(axis=0)) / stds
    corr = (z.T @ z) / m
    eigvals, eigvecs = np.linalg.eigh(corr)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.maximum(eigvals[order], 0.0)
    eigvecs = eigvecs[:, order]
    top = eigvecs[:, :dims].copy()
    for j in range(dims):
        lead = int(np.abs(top[:, j]).argmax())
        if top[lead, j] < 0:
            top[:, j] = -top[:, j]
    coords = z @ top
    ratios = eigvals[:dims] / eigvals.sum()
    return coords, ratios
