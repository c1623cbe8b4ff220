"""Manifold dimensionality reduction (UMAP-style).

Pipeline: exact kNN graph -> smoothed membership weights -> fuzzy union ->
spectral initialization -> SGD layout with negative sampling. Deterministic
for a fixed seed (single-threaded layout loop); the hot loop lives in
``_kernels``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize
import scipy.sparse

from ._kernels import optimize_layout_kernel
from .embed_store import EmbeddingMatrix


class ReduceError(ValueError):
    pass


@dataclass
class ReduceConfig:
    n_neighbors: int = 5
    n_components: int = 5
    min_dist: float = 0.0
    metric: str = "cosine"
    n_epochs: int = 500
    seed: int = 42
    spread: float = 1.0
    negative_sample_rate: int = 5
    learning_rate: float = 1.0

    def __post_init__(self):
        if self.n_neighbors < 2:
            raise ReduceError("n_neighbors must be >= 2")
        if self.n_components < 1:
            raise ReduceError("n_components must be >= 1")
        if self.metric not in ("cosine", "euclidean"):
            raise ReduceError(f"unsupported metric {self.metric!r}")
        if self.min_dist < 0:
            raise ReduceError("min_dist must be >= 0")


def pairwise_distances(X: np.ndarray, metric: str) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if metric == "cosine":
        norms = np.linalg.norm(X, axis=1)
        if np.any(norms == 0):
            raise ReduceError(
                f"zero-norm row {int(np.argmin(norms))} under cosine metric")
        sims = (X / norms[:, None]) @ (X / norms[:, None]).T
        d = 1.0 - np.clip(sims, -1.0, 1.0)
    else:
        sq = np.sum(X * X, axis=1)
        d = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
        d = np.sqrt(np.maximum(d, 0.0))
    np.fill_diagonal(d, 0.0)
    return d


def knn_graph(X: np.ndarray, k: int, metric: str):
    """Exact brute-force k nearest neighbors, self excluded, ties by index.

    Returns (indices (n,k), distances (n,k)) with distances ascending per row.
    """
    n = X.shape[0]
    if k >= n:
        raise ReduceError(f"k={k} must be < n_rows={n}")
    d = pairwise_distances(X, metric)
    np.fill_diagonal(d, np.inf)
    idx = np.argsort(d, axis=1, kind="stable")[:, :k]
    dist = np.take_along_axis(d, idx, axis=1)
    return idx, dist


def smooth_weights(distances: np.ndarray, k: int,
                   n_iter: int = 64, lo: float = 1e-12, hi: float = 1e4):
    """Per-row (rho, sigma) calibration and membership weights.

    rho is the nearest-neighbor distance; sigma solves
    sum_j exp(-max(0, d_j - rho) / sigma) = log2(k) by bisection. Rows with
    all distances equal get weight 1 everywhere (sigma capped at the
    bracket's upper end).
    """
    distances = np.asarray(distances, dtype=np.float64)
    n = distances.shape[0]
    target = np.log2(k)
    rho = distances[:, 0].copy()
    sigma = np.empty(n)
    weights = np.empty_like(distances)
    for i in range(n):
        d = np.maximum(distances[i] - rho[i], 0.0)
        if np.all(d == 0.0):
            sigma[i] = hi
            weights[i] = 1.0
            continue
        a, b = lo, hi
        for _ in range(n_iter):
            mid = 0.5 * (a + b)
            if np.sum(np.exp(-d / mid)) > target:
                b = mid
            else:
                a = mid
        sigma[i] = 0.5 * (a + b)
        weights[i] = np.exp(-d / sigma[i])
    return rho, sigma, weights


def fuzzy_union(knn_idx: np.ndarray, weights: np.ndarray) -> scipy.sparse.coo_matrix:
    """Symmetrize directed membership weights: W = A + A^T - A o A^T."""
    n, k = knn_idx.shape
    rows = np.repeat(np.arange(n), k)
    cols = knn_idx.ravel()
    A = scipy.sparse.coo_matrix((weights.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    T = A.multiply(A.T)
    W = (A + A.T - T).tocsr()
    W.eliminate_zeros()
    return W.tocoo()


def fit_curve_params(min_dist: float, spread: float) -> tuple[float, float]:
    """Least-squares (a, b) so 1/(1 + a d^{2b}) matches the target falloff
    psi(d) = 1 for d <= min_dist else exp(-(d - min_dist)/spread)."""
    xs = np.linspace(0, 3.0 * spread, 300)
    ys = np.where(xs < min_dist, 1.0, np.exp(-(xs - min_dist) / spread))

    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2.0 * b))

    (a, b), _ = scipy.optimize.curve_fit(curve, xs, ys, p0=[1.0, 1.0],
                                         maxfev=5000)
    return float(a), float(b)


def spectral_init(W: scipy.sparse.coo_matrix, n_components: int,
                  seed: int) -> np.ndarray:
    """Layout init from the normalized graph Laplacian's spectral embedding.

    Falls back to seeded uniform noise in [-10, 10] when the eigensolve
    fails. Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    n = W.shape[0]
    try:
        A = W.toarray()
        deg = A.sum(axis=1)
        if np.any(deg == 0):
            raise np.linalg.LinAlgError("isolated vertex")
        dinv = 1.0 / np.sqrt(deg)
        L = np.eye(n) - (dinv[:, None] * A * dinv[None, :])
        vals, vecs = np.linalg.eigh(L)
        order = np.argsort(vals)
        init = vecs[:, order[1:n_components + 1]]
        if init.shape[1] < n_components:
            raise np.linalg.LinAlgError("not enough eigenvectors")
        expansion = 10.0 / max(np.abs(init).max(), 1e-10)
        init = init * expansion
        init = init + rng.normal(scale=1e-4, size=init.shape)
    except np.linalg.LinAlgError:
        init = rng.uniform(-10.0, 10.0, size=(n, n_components))
    return np.ascontiguousarray(init, dtype=np.float64)


def fit_transform(X: EmbeddingMatrix, config: ReduceConfig) -> EmbeddingMatrix:
    """Reduce an embedding matrix to ``config.n_components`` dimensions."""
    n = X.n_rows
    if n <= config.n_components + 1:
        raise ReduceError(
            f"need more than n_components + 1 = {config.n_components + 1} rows, "
            f"got {n}")
    if config.n_neighbors >= n:
        raise ReduceError(f"n_neighbors={config.n_neighbors} must be < n_rows={n}")

    idx, dist = knn_graph(X.data, config.n_neighbors, config.metric)
    _, _, weights = smooth_weights(dist, config.n_neighbors)
    W = fuzzy_union(idx, weights)

    embedding = spectral_init(W, config.n_components, config.seed)

    w = W.data.copy()
    # drop edges sampled less than once over the whole schedule
    w[w < w.max() / config.n_epochs] = 0.0
    keep = w > 0.0
    heads = W.row[keep].astype(np.int64)
    tails = W.col[keep].astype(np.int64)
    w = w[keep]
    epochs_per_sample = w.max() / w

    a, b = fit_curve_params(config.min_dist, config.spread)
    optimize_layout_kernel(embedding, heads, tails, epochs_per_sample,
                           config.n_epochs, n, a, b, 1.0,
                           config.learning_rate, config.negative_sample_rate,
                           np.uint64((config.seed * 2654435761 + 1)
                                     & 0xFFFFFFFFFFFFFFFF))
    if not np.all(np.isfinite(embedding)):
        raise ReduceError("layout diverged to non-finite values")
    return EmbeddingMatrix(data=embedding.astype(np.float32), ids=list(X.ids))
