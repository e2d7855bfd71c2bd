"""Classification scores and internal clustering validation indices.

The clustering indices score a labelled point set (labels act as the
cluster assignment) with Euclidean distances.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import cdist

from .exceptions import ShapeError

IMPROVED = "improved"
NOT_IMPROVED = "not_improved"


def _pair(pred, truth):
    pred = np.asarray(pred).reshape(-1)
    truth = np.asarray(truth).reshape(-1)
    if pred.size != truth.size:
        raise ShapeError(f"{pred.size} predictions for {truth.size} labels")
    if pred.size == 0:
        raise ShapeError("no observations to score")
    return pred, truth


def accuracy(pred, truth) -> float:
    pred, truth = _pair(pred, truth)
    return float(np.mean(pred == truth))


def f1_macro(pred, truth, k: int) -> float:
    """Unweighted mean of per-class F1; a class with no precision and no recall scores 0."""
    pred, truth = _pair(pred, truth)
    scores = []
    for c in range(k):
        tp = np.sum((pred == c) & (truth == c))
        fp = np.sum((pred == c) & (truth != c))
        fn = np.sum((pred != c) & (truth == c))
        denom = 2 * tp + fp + fn
        scores.append(2 * tp / denom if denom else 0.0)
    return float(np.mean(scores))


def _clusters(X, Z):
    X = np.asarray(X, dtype=np.float64)
    Z = np.asarray(Z).reshape(-1)
    if X.ndim != 2 or X.shape[0] != Z.size:
        raise ShapeError(f"{X.shape} points for {Z.size} labels")
    labels, Z = np.unique(Z, return_inverse=True)
    if labels.size < 2:
        raise ValueError("clustering scores need at least two clusters")
    return X, Z, labels.size


def davies_bouldin(X, Z) -> float:
    """Mean over clusters of the worst ``(s_i + s_j) / d(c_i, c_j)`` ratio (lower is better)."""
    X, Z, k = _clusters(X, Z)
    centroids = np.array([X[Z == c].mean(axis=0) for c in range(k)])
    spread = np.array([np.linalg.norm(X[Z == c] - centroids[c], axis=1).mean() for c in range(k)])
    if np.allclose(spread, 0):
        return 0.0
    dist = cdist(centroids, centroids)
    if np.allclose(dist, 0):
        return 0.0
    dist[dist == 0] = np.inf
    ratio = (spread[:, None] + spread[None, :]) / dist
    np.fill_diagonal(ratio, -np.inf)
    return float(np.mean(np.max(ratio, axis=1)))


def silhouette(X, Z) -> float:
    """Mean silhouette coefficient; points in singleton clusters contribute 0."""
    X, Z, k = _clusters(X, Z)
    m = X.shape[0]
    if k >= m:
        raise ValueError(f"silhouette needs fewer clusters ({k}) than points ({m})")
    D = cdist(X, X)
    sizes = np.bincount(Z, minlength=k)
    # per-point summed distance to each cluster
    sums = np.zeros((m, k))
    for c in range(k):
        sums[:, c] = D[:, Z == c].sum(axis=1)
    own = sizes[Z]
    a = np.where(own > 1, sums[np.arange(m), Z] / np.maximum(own - 1, 1), 0.0)
    means = sums / sizes[None, :]
    means[np.arange(m), Z] = np.inf
    b = means.min(axis=1)
    denom = np.maximum(a, b)
    s = np.where((own > 1) & (denom > 0), (b - a) / np.where(denom > 0, denom, 1.0), 0.0)
    return float(np.mean(s))


def calinski_harabasz(X, Z) -> float:
    """Between/within dispersion ratio (higher is better); ``inf`` when clusters have no spread."""
    X, Z, k = _clusters(X, Z)
    m = X.shape[0]
    if m <= k:
        raise ValueError(f"Calinski-Harabasz needs more points ({m}) than clusters ({k})")
    mean = X.mean(axis=0)
    between = 0.0
    within = 0.0
    for c in range(k):
        pts = X[Z == c]
        centroid = pts.mean(axis=0)
        between += pts.shape[0] * np.sum((centroid - mean) ** 2)
        within += np.sum((pts - centroid) ** 2)
    if within == 0:
        return float("inf")
    return float(between * (m - k) / (within * (k - 1)))


class ClusterScores(NamedTuple):
    davies_bouldin: float
    silhouette: float
    calinski_harabasz: float


def cluster_scores(X, Z) -> ClusterScores:
    return ClusterScores(davies_bouldin(X, Z), silhouette(X, Z), calinski_harabasz(X, Z))


class Vote(NamedTuple):
    verdict: str
    wins: int


def majority_vote_improvement(orig: ClusterScores, transf: ClusterScores) -> Vote:
    """Count strict improvements (DB down, silhouette up, CH up); two or more wins means improved."""
    wins = int(transf.davies_bouldin < orig.davies_bouldin)
    wins += int(transf.silhouette > orig.silhouette)
    wins += int(transf.calinski_harabasz > orig.calinski_harabasz)
    return Vote(IMPROVED if wins >= 2 else NOT_IMPROVED, wins)
