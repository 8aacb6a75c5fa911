"""Evaluation metrics: accuracy, subspace-preserving error, connectivity,
and the per-subset / combined residual diagnostics.

Accuracy maximizes the confusion-matrix trace over label permutations; the
maximum-weight bipartite matching (Hungarian algorithm) computes it exactly
without the factorial sweep. Subspace-preserving error measures the average
fraction of each column's l1 mass spent on points of other clusters.
Connectivity averages the algebraic connectivity (second-smallest normalized
Laplacian eigenvalue) of every ground-truth cluster's affinity subgraph.

Connectivity uses the component-preserving Laplacian convention: zero-degree
rows stay zero, so the multiplicity of eigenvalue 0 equals the number of
connected components and any disconnected cluster (including one with an
isolated, never-sampled point) contributes exactly 0. This differs from the
embedding Laplacian in :mod:`pmssc.spectral`, which gives isolated nodes an
identity row to keep them out of the clustering embedding.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import linalg as sla
from scipy import sparse
from scipy.optimize import linear_sum_assignment

from .pms import PointSolution, reconstruct
from .types import CoeffMatrix, SubsetPlan


@dataclass(frozen=True)
class ResidualDiagnostics:
    """Mean self-expressive residuals: one per subset, one for the fused model."""

    per_subset_mean: np.ndarray
    combined_mean: float


def _check_lengths(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"label vectors differ in length: {a.shape} vs {b.shape}")
    return a, b


def clustering_accuracy(est_labels, true_labels) -> float:
    """Percentage of correctly labeled points under the best label permutation."""
    est, true = _check_lengths(est_labels, true_labels)
    k = int(max(est.max(), true.max())) + 1 if est.size else 1
    confusion = np.zeros((k, k), dtype=np.int64)
    np.add.at(confusion, (est, true), 1)
    rows, cols = linear_sum_assignment(-confusion)
    return 100.0 * confusion[rows, cols].sum() / est.size


def subspace_preserving_error(C: CoeffMatrix, true_labels) -> float:
    """Average percentage of coefficient l1 mass outside the point's own cluster.

    Columns with zero l1 mass (e.g. points never covered by a subset) count
    as fully non-preserving and trigger a warning naming them.
    """
    labels = np.asarray(true_labels, dtype=np.int64)
    if labels.size != C.n:
        raise ValueError(f"label vector length {labels.size} does not match N={C.n}")
    total = 0.0
    empty = []
    for j, col in enumerate(C.columns):
        mass = np.abs(col.values).sum()
        if mass == 0.0:
            empty.append(j)
            total += 1.0
            continue
        own = np.abs(col.values[labels[col.indices] == labels[j]]).sum()
        total += 1.0 - own / mass
    if empty:
        warnings.warn(
            f"{len(empty)} coefficient column(s) have zero l1 mass and count as "
            f"fully non-preserving: {empty[:10]}{'...' if len(empty) > 10 else ''}",
            RuntimeWarning,
            stacklevel=2,
        )
    return 100.0 * total / C.n


def _component_preserving_laplacian(W: np.ndarray) -> np.ndarray:
    degrees = W.sum(axis=1)
    connected = degrees > 0.0
    inv_sqrt = np.where(connected, 1.0 / np.sqrt(np.where(connected, degrees, 1.0)), 0.0)
    L = -(inv_sqrt[:, None] * W) * inv_sqrt[None, :]
    L[np.diag_indices_from(L)] = np.where(connected, 1.0, 0.0)
    return L


def algebraic_connectivity(W: np.ndarray) -> float:
    """Second-smallest normalized-Laplacian eigenvalue of one subgraph."""
    L = _component_preserving_laplacian(np.asarray(W, dtype=np.float64))
    vals = sla.eigh(L, eigvals_only=True, subset_by_index=(0, 1))
    return max(float(vals[1]), 0.0)


def connectivity(A, true_labels, n_clusters: int) -> float:
    """Mean algebraic connectivity of the ground-truth cluster subgraphs.

    A cluster whose subgraph is disconnected contributes 0; singleton or
    empty clusters also contribute 0, with a warning.
    """
    labels = np.asarray(true_labels, dtype=np.int64)
    if labels.size != A.shape[0]:
        raise ValueError(
            f"label vector length {labels.size} does not match N={A.shape[0]}"
        )
    dense = A.toarray() if sparse.issparse(A) else np.asarray(A, dtype=np.float64)
    degenerate = []
    total = 0.0
    for group in range(n_clusters):
        members = np.flatnonzero(labels == group)
        if members.size < 2:
            degenerate.append(group)
            continue
        total += algebraic_connectivity(dense[np.ix_(members, members)])
    if degenerate:
        warnings.warn(
            f"cluster(s) {degenerate} have fewer than two points; "
            "they contribute 0 to connectivity",
            RuntimeWarning,
            stacklevel=2,
        )
    return total / n_clusters


def residual_diagnostics(
    X: np.ndarray,
    plan: SubsetPlan,
    points: Sequence[PointSolution],
    coeffs: CoeffMatrix,
) -> ResidualDiagnostics:
    """Mean residual per subset model and for the fused model.

    The per-subset mean divides by the subset size; points outside a subset
    contribute nothing there. The combined mean divides by N and is
    recomputed from the fused coefficient matrix.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[1]
    size = plan.subsets[0].size if plan.num_subsets else 0
    per_subset = np.zeros(plan.num_subsets)
    for sol_point in points:
        for sol in sol_point.subset_solutions:
            per_subset[sol.subset] += sol.residual_norm
    per_subset /= size

    combined = 0.0
    for i in range(n):
        combined += float(np.linalg.norm(X[:, i] - reconstruct(X, coeffs.column(i))))
    return ResidualDiagnostics(per_subset, combined / n)
