"""Lloyd's k-means with k-means++ seeding, and progressive subspace generation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import Dataset


@dataclass
class ClusterSet:
    clusters: list[np.ndarray]
    k_of_cluster: list[int]
    centroids: list[np.ndarray]
    wcss: dict[int, float] = field(default_factory=dict)
    wcss_trace: dict[int, list[float]] = field(default_factory=dict)

    def __len__(self):
        return len(self.clusters)

    def index_within_k(self, i: int) -> int:
        """Position of cluster ``i`` among the clusters produced by the same k."""
        k = self.k_of_cluster[i]
        return sum(1 for j in range(i) if self.k_of_cluster[j] == k)


def _sq_dist(X, C):
    diff = X[:, None, :] - C[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _plus_plus(X, k, rng):
    n = X.shape[0]
    centers = [int(rng.integers(n))]
    closest = _sq_dist(X, X[centers])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total <= 0:
            # Remaining points coincide with chosen centres; pick any unused row.
            unused = np.setdiff1d(np.arange(n), centers)
            idx = int(rng.choice(unused))
        else:
            idx = int(rng.choice(n, p=closest / total))
        centers.append(idx)
        closest = np.minimum(closest, _sq_dist(X, X[[idx]])[:, 0])
    return X[centers].copy()


def lloyd(X, centroids, max_iter=100, tol=1e-6):
    """Run Lloyd iterations from ``centroids``; returns (assignment, centroids, wcss trace)."""
    trace = []
    for _ in range(max_iter):
        d = _sq_dist(X, centroids)
        assign = np.argmin(d, axis=1)
        trace.append(float(d[np.arange(X.shape[0]), assign].sum()))
        new = centroids.copy()
        for j in range(centroids.shape[0]):
            members = assign == j
            if members.any():
                new[j] = X[members].mean(axis=0)
        shift = float(np.sqrt(((new - centroids) ** 2).sum(axis=1)).max())
        centroids = new
        if shift < tol:
            break
    d = _sq_dist(X, centroids)
    assign = np.argmin(d, axis=1)
    trace.append(float(d[np.arange(X.shape[0]), assign].sum()))
    return assign, centroids, trace


def kmeans(ds: Dataset | np.ndarray, k: int, seed: int = 0, n_init: int = 5,
           max_iter: int = 100, tol: float = 1e-6) -> ClusterSet:
    """Partition rows into at most ``k`` non-empty clusters (best of ``n_init`` restarts)."""
    X = ds.samples if isinstance(ds, Dataset) else np.asarray(ds, dtype=float)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_init):
        assign, centroids, trace = lloyd(X, _plus_plus(X, k, rng), max_iter, tol)
        if best is None or trace[-1] < best[2][-1]:
            best = (assign, centroids, trace)
    assign, centroids, trace = best
    clusters, cents = [], []
    for j in range(k):
        rows = np.flatnonzero(assign == j)
        if rows.size:
            clusters.append(rows)
            cents.append(centroids[j])
    return ClusterSet(clusters, [k] * len(clusters), cents, {k: trace[-1]}, {k: trace})


def choose_K(m: int) -> int:
    """Upper clustering bound: fifth root of the sample count, rounded, at least 2."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    return max(2, round(m ** 0.2))


def generate_subspaces(ds: Dataset | np.ndarray, K: int, seed: int = 0, n_init: int = 5) -> ClusterSet:
    """Pool the clusters of k-means for every k = 1..K."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    X = ds.samples if isinstance(ds, Dataset) else np.asarray(ds, dtype=float)
    K = min(K, X.shape[0])
    out = ClusterSet([], [], [])
    for k in range(1, K + 1):
        part = kmeans(X, k, seed=seed + k, n_init=n_init)
        out.clusters += part.clusters
        out.k_of_cluster += part.k_of_cluster
        out.centroids += part.centroids
        out.wcss.update(part.wcss)
        out.wcss_trace.update(part.wcss_trace)
    return out
