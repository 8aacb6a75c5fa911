"""Affinity construction and normalized-cut spectral clustering.

The affinity of a coefficient matrix is |C| + |C^T|. Clustering uses the
symmetric normalized Laplacian plus row normalization of the embedding
(spectrally equivalent to the random-walk normalized cut), a dense symmetric
eigensolve, and a seeded k-means with k-means++ initialization.

k-means is implemented here rather than imported: the clustering contract
requires bit-identical labels for a fixed seed regardless of how many worker
threads the rest of the pipeline uses, which is easiest to guarantee with a
plain numpy implementation.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg as sla
from scipy import sparse

from .types import CoeffMatrix

KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 300
KMEANS_REL_TOL = 1e-6


def build_affinity(C: CoeffMatrix) -> sparse.csr_matrix:
    """Symmetric nonnegative affinity A = |C| + |C^T| with zero diagonal."""
    M = C.to_csc()
    A = abs(M) + abs(M.T)
    return A.tocsr()


def normalized_laplacian(A) -> np.ndarray:
    """Dense symmetric normalized Laplacian I - D^(-1/2) A D^(-1/2).

    Zero-degree rows use D_ii = 1, which leaves an identity row: isolated
    nodes get eigenvalue 1 and stay out of the low end of the spectrum that
    the clustering embedding is built from (so A = 0 gives L = I).
    """
    if sparse.issparse(A):
        A = A.toarray()
    A = np.asarray(A, dtype=np.float64)
    degrees = A.sum(axis=1)
    inv_sqrt = 1.0 / np.sqrt(np.where(degrees > 0.0, degrees, 1.0))
    L = -(inv_sqrt[:, None] * A) * inv_sqrt[None, :]
    L[np.diag_indices_from(L)] += 1.0
    return L


def spectral_embedding(A, n_clusters: int) -> np.ndarray:
    """Rows of the ``n_clusters`` lowest Laplacian eigenvectors, row-normalized.

    Rows that are exactly zero (isolated nodes) are left as zero.
    """
    L = normalized_laplacian(A)
    _, vectors = sla.eigh(L, subset_by_index=(0, n_clusters - 1))
    norms = np.linalg.norm(vectors, axis=1)
    scale = np.where(norms > 0.0, norms, 1.0)
    return vectors / scale[:, None]


def spectral_clustering(A, n_clusters: int, seed: int) -> np.ndarray:
    """Cluster the affinity graph into ``n_clusters`` groups via normalized cut."""
    n = A.shape[0]
    if n_clusters > n:
        raise ValueError(f"cannot split {n} points into {n_clusters} clusters")
    embedding = spectral_embedding(A, n_clusters)
    rng = np.random.default_rng(seed)
    labels, _ = kmeans(embedding, n_clusters, rng)
    return labels


def _kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    sq_dist = ((points - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = sq_dist.sum()
        if total > 0.0:
            u = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(sq_dist), u, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = int(rng.integers(n))
        centers[j] = points[idx]
        sq_dist = np.minimum(sq_dist, ((points - centers[j]) ** 2).sum(axis=1))
    return centers


def _assign(points: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # pairwise squared distances via the expansion trick; ties go low
    d = (
        (points**2).sum(axis=1)[:, None]
        - 2.0 * points @ centers.T
        + (centers**2).sum(axis=1)[None, :]
    )
    labels = np.argmin(d, axis=1)
    return labels, np.maximum(d[np.arange(points.shape[0]), labels], 0.0)


def _lloyd(points, k, rng, max_iter, rel_tol):
    centers = _kmeans_pp_init(points, k, rng)
    labels, sq = _assign(points, centers)
    inertia = float(sq.sum())
    for _ in range(max_iter):
        for j in range(k):
            mask = labels == j
            if mask.any():
                centers[j] = points[mask].mean(axis=0)
            else:
                # re-seed an emptied cluster at the worst-fit point
                centers[j] = points[int(np.argmax(sq))]
        labels, sq = _assign(points, centers)
        new_inertia = float(sq.sum())
        if inertia - new_inertia <= rel_tol * max(inertia, 1e-300):
            inertia = new_inertia
            break
        inertia = new_inertia
    return labels, inertia


def kmeans(
    points: np.ndarray,
    k: int,
    rng: np.random.Generator,
    n_init: int = KMEANS_RESTARTS,
    max_iter: int = KMEANS_MAX_ITER,
    rel_tol: float = KMEANS_REL_TOL,
) -> tuple[np.ndarray, float]:
    """Seeded k-means returning the best-inertia labeling over restarts."""
    points = np.asarray(points, dtype=np.float64)
    best_labels, best_inertia = None, np.inf
    for _ in range(n_init):
        labels, inertia = _lloyd(points, k, rng, max_iter, rel_tol)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return best_labels.astype(np.int64), best_inertia
