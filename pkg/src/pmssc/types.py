"""Shared domain types for the multi-subset self-expressive pipeline.

Conventions used throughout the package:

- Data matrices are D x N with one data point per column.
- All indices are 0-based. File formats in :mod:`pmssc.io` document this.
- Sparse coefficient vectors store sorted (index, value) pairs; duplicate
  indices are rejected at construction so set operations and the
  zero-diagonal invariant stay cheap to verify.

Everything here is immutable after construction and safe to share
read-only across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

if TYPE_CHECKING:
    from .metrics import ResidualDiagnostics


class ParameterError(ValueError):
    """A parameter violates its documented constraint."""


def subset_size(sampling_rate: float, n_points: int) -> int:
    """Number of points per sampled subset, ceil(rate * N).

    The product is rounded to 9 decimals first so binary-float fuzz
    (e.g. 0.1 * 20 -> 2.0000000000000004) cannot bump the ceiling past
    the mathematical value.
    """
    return int(math.ceil(round(sampling_rate * n_points, 9)))


@dataclass(frozen=True)
class Params:
    """Solver parameters shared by the whole pipeline.

    Attributes
    ----------
    num_subsets : int
        Number of sampled subsets (T).
    sampling_rate : float
        Fraction of points per subset, in (0, 1]; each subset has
        ceil(sampling_rate * N) members.
    sparsity : int
        Maximum support size of each per-subset coefficient vector.
    num_clusters : int
        Number of clusters for spectral clustering.
    epsilon : float
        Residual stopping threshold for both greedy solvers.
    seed : int
        Seed for all randomness (subset sampling and k-means).
    threads : int
        Worker threads for the per-point solves; 0 means auto.
    """

    num_subsets: int
    sampling_rate: float
    sparsity: int
    num_clusters: int
    epsilon: float = 1e-6
    seed: int = 0
    threads: int = 0


def validate_params(params: Params, n_points: int) -> None:
    """Check Params invariants against a dataset of ``n_points`` columns.

    Raises ParameterError with a message naming the violated constraint.
    """
    if n_points < 1:
        raise ParameterError(f"dataset must contain at least one point, got N={n_points}")
    if params.num_subsets < 1:
        raise ParameterError(f"num_subsets must be >= 1, got {params.num_subsets}")
    if not (0.0 < params.sampling_rate <= 1.0):
        raise ParameterError(
            f"sampling_rate must lie in (0, 1], got {params.sampling_rate}"
        )
    if params.sparsity < 1:
        raise ParameterError(f"sparsity must be >= 1, got {params.sparsity}")
    if params.epsilon < 0.0:
        raise ParameterError(f"epsilon must be >= 0, got {params.epsilon}")
    if params.num_clusters < 1:
        raise ParameterError(f"num_clusters must be >= 1, got {params.num_clusters}")
    if params.threads < 0:
        raise ParameterError(f"threads must be >= 0, got {params.threads}")
    m = subset_size(params.sampling_rate, n_points)
    if m < 2:
        raise ParameterError(
            f"subset size ceil(rate*N) = {m} is too small: a dictionary of one point "
            "minus the self-exclusion is empty (need ceil(rate*N) >= 2)"
        )
    if params.sparsity > m - 1:
        raise ParameterError(
            f"sparsity {params.sparsity} exceeds the admissible dictionary size "
            f"ceil(rate*N) - 1 = {m - 1}"
        )


def _as_readonly(arr: np.ndarray) -> np.ndarray:
    out = np.asarray(arr)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class SparseVector:
    """Sparse vector as sorted (index, value) pairs over a logical length."""

    length: int
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        if idx.ndim != 1 or val.ndim != 1 or idx.shape != val.shape:
            raise ValueError("indices and values must be matching 1-d arrays")
        if idx.size:
            if idx[0] < 0 or idx[-1] >= self.length:
                raise IndexError(
                    f"index out of range for length {self.length}: "
                    f"[{idx.min()}, {idx.max()}]"
                )
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing (no duplicates)")
        object.__setattr__(self, "indices", _as_readonly(idx))
        object.__setattr__(self, "values", _as_readonly(val))

    @classmethod
    def from_pairs(cls, length: int, pairs: Sequence[tuple[int, float]]) -> "SparseVector":
        if not pairs:
            return cls(length, np.empty(0, np.int64), np.empty(0, np.float64))
        idx, val = zip(*pairs)
        order = np.argsort(np.asarray(idx, dtype=np.int64), kind="stable")
        return cls(
            length,
            np.asarray(idx, dtype=np.int64)[order],
            np.asarray(val, dtype=np.float64)[order],
        )

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "SparseVector":
        dense = np.asarray(dense, dtype=np.float64)
        idx = np.flatnonzero(dense)
        return cls(dense.size, idx.astype(np.int64), dense[idx])

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.length)
        out[self.indices] = self.values
        return out

    def value_at(self, index: int) -> float:
        pos = np.searchsorted(self.indices, index)
        if pos < self.indices.size and self.indices[pos] == index:
            return float(self.values[pos])
        return 0.0

    def scaled(self, factor: float) -> "SparseVector":
        return SparseVector(self.length, self.indices, self.values * factor)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (
            self.length == other.length
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )


def add_sparse(vectors: Sequence[SparseVector], length: int) -> SparseVector:
    """Sum sparse vectors; entries that cancel to exactly zero are dropped."""
    nonempty = [v for v in vectors if v.nnz]
    if not nonempty:
        return SparseVector(length, np.empty(0, np.int64), np.empty(0, np.float64))
    idx = np.concatenate([v.indices for v in nonempty])
    val = np.concatenate([v.values for v in nonempty])
    uniq, inverse = np.unique(idx, return_inverse=True)
    summed = np.zeros(uniq.size)
    np.add.at(summed, inverse, val)
    keep = summed != 0.0
    return SparseVector(length, uniq[keep], summed[keep])


class CoeffMatrix:
    """N sparse columns c_0..c_{N-1}; the diagonal is identically zero."""

    def __init__(self, columns: Sequence[SparseVector]):
        columns = list(columns)
        n = len(columns)
        for i, col in enumerate(columns):
            if col.length != n:
                raise ValueError(
                    f"column {i} has length {col.length}, expected {n}"
                )
            if col.value_at(i) != 0.0:
                raise ValueError(f"column {i} has a nonzero diagonal entry")
        self._columns = tuple(columns)

    @property
    def n(self) -> int:
        return len(self._columns)

    @property
    def columns(self) -> tuple[SparseVector, ...]:
        return self._columns

    def column(self, i: int) -> SparseVector:
        return self._columns[i]

    def diagonal_is_zero(self) -> bool:
        return all(col.value_at(i) == 0.0 for i, col in enumerate(self._columns))

    def to_csc(self):
        from scipy import sparse

        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([c.nnz for c in self._columns])
        if self.n and indptr[-1]:
            indices = np.concatenate([c.indices for c in self._columns])
            data = np.concatenate([c.values for c in self._columns])
        else:
            indices = np.empty(0, np.int64)
            data = np.empty(0, np.float64)
        return sparse.csc_matrix((data, indices, indptr), shape=(self.n, self.n))

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        for i, col in enumerate(self._columns):
            out[col.indices, i] = col.values
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffMatrix):
            return NotImplemented
        return self._columns == other._columns


@dataclass(frozen=True)
class SubsetPlan:
    """T sampled index subsets plus the weights that produced them.

    ``subsets[t]`` is sorted ascending; ``membership[i]`` lists, sorted, the
    subsets containing point i and is exactly the inverse map of ``subsets``.
    """

    subsets: tuple[np.ndarray, ...]
    final_weights: np.ndarray
    membership: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "subsets", tuple(_as_readonly(s) for s in self.subsets))
        object.__setattr__(self, "final_weights", _as_readonly(self.final_weights))
        object.__setattr__(
            self, "membership", tuple(_as_readonly(m) for m in self.membership)
        )

    @property
    def n_points(self) -> int:
        return int(self.final_weights.size)

    @property
    def num_subsets(self) -> int:
        return len(self.subsets)


@dataclass(frozen=True)
class CombinationWeights:
    """Per-point weights over the T subset reconstructions."""

    values: np.ndarray
    support: np.ndarray

    def __post_init__(self):
        val = np.asarray(self.values, dtype=np.float64)
        sup = np.sort(np.asarray(self.support, dtype=np.int64))
        outside = np.setdiff1d(np.flatnonzero(val), sup)
        if outside.size:
            raise ValueError(f"nonzero weights outside the support at {outside.tolist()}")
        object.__setattr__(self, "values", _as_readonly(val))
        object.__setattr__(self, "support", _as_readonly(sup))

    @property
    def num_subsets(self) -> int:
        return int(self.values.size)


@dataclass
class ClusteringReport:
    """Labels plus the evaluation quantities of one clustering run.

    Metrics needing ground truth are None when no true labels were given.
    """

    labels: np.ndarray
    runtime_seconds: float
    mode: str = "pmssc"
    sampling: str = "weighted"
    accuracy_pct: Optional[float] = None
    sre_pct: Optional[float] = None
    connectivity: Optional[float] = None
    residuals: Optional["ResidualDiagnostics"] = None
    params: Optional[Params] = None
    labels_path: Optional[str] = None

    def __post_init__(self):
        if self.accuracy_pct is not None and not (0.0 <= self.accuracy_pct <= 100.0):
            raise ValueError(f"accuracy_pct out of [0, 100]: {self.accuracy_pct}")
        if self.sre_pct is not None and not (0.0 <= self.sre_pct <= 100.0):
            raise ValueError(f"sre_pct out of [0, 100]: {self.sre_pct}")
        if self.connectivity is not None and self.connectivity < 0.0:
            raise ValueError(f"connectivity must be >= 0: {self.connectivity}")
