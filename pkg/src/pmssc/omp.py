"""Orthogonal matching pursuit solvers for the two greedy subproblems.

``omp_subset`` computes the sparse self-expressive coefficients of one point
against one sampled subset dictionary; ``omp_combination`` fits the per-point
weights over the T subset reconstructions. Both share the same loop: pick the
admissible atom with the largest absolute correlation to the residual, refit
by least squares on the grown support, update the residual, and stop when the
support cap is hit, the residual norm drops to ``tol``, or no remaining atom
has nonzero correlation.

Correlation uses the absolute inner product (the standard OMP rule: together
with the least-squares refit it also captures anti-correlated atoms).
Ties in the argmax go to the lowest index for reproducibility. The support
least-squares problem is re-solved from scratch each iteration with a
rank-revealing pivoted QR; supports are small so incremental updates are not
worth the complexity.

Both solvers are pure functions and may run concurrently on shared read-only
dictionaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg as sla

from .types import CombinationWeights, SparseVector


@dataclass(frozen=True)
class OmpState:
    """Solver state after one iteration: support so far and the residual."""

    support: tuple[int, ...]
    residual: np.ndarray
    iteration: int


@dataclass(frozen=True)
class SubsetDictionary:
    """Compact dictionary for one subset: the sampled columns plus the map
    back to global point indices (sorted ascending)."""

    atoms: np.ndarray      # D x m
    indices: np.ndarray    # (m,) global column ids
    n_total: int
    atoms_t: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        atoms = np.ascontiguousarray(np.asarray(self.atoms, dtype=np.float64))
        indices = np.asarray(self.indices, dtype=np.int64)
        if atoms.ndim != 2 or indices.ndim != 1 or atoms.shape[1] != indices.size:
            raise ValueError("atoms must be D x m with one global index per column")
        if indices.size and np.any(np.diff(indices) <= 0):
            raise ValueError("global indices must be strictly increasing")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "indices", indices)
        # m x D layout makes the per-iteration correlation a contiguous matvec
        object.__setattr__(self, "atoms_t", np.ascontiguousarray(atoms.T))

    @property
    def size(self) -> int:
        return int(self.indices.size)


def normalize_columns(X: np.ndarray) -> np.ndarray:
    """Scale every nonzero column to unit Euclidean norm; zero columns stay zero."""
    X = np.asarray(X, dtype=np.float64)
    norms = np.linalg.norm(X, axis=0)
    scale = np.where(norms > 0.0, norms, 1.0)
    return X / scale


def _support_lstsq(atoms: np.ndarray, x: np.ndarray) -> np.ndarray:
    # rank-revealing pivoted QR; gracefully handles near-dependent atoms
    coeffs, _, _, _ = sla.lstsq(atoms, x, lapack_driver="gelsy", check_finite=False)
    return coeffs


def _greedy_pursuit(
    atoms: np.ndarray,
    atoms_t: np.ndarray,
    x: np.ndarray,
    max_support: int,
    tol: float,
    blocked: Optional[int],
    history: Optional[list],
) -> tuple[list[int], np.ndarray]:
    """Shared greedy loop; returns (support in selection order, coefficients)."""
    residual = x.astype(np.float64, copy=True)
    support: list[int] = []
    coeffs = np.empty(0)
    k = 0
    while k < max_support and math.sqrt(float(residual @ residual)) > tol:
        corr = np.abs(atoms_t @ residual)
        if blocked is not None:
            corr[blocked] = -1.0
        if support:
            corr[support] = -1.0
        best = int(np.argmax(corr))
        if corr[best] <= 0.0:
            break
        support.append(best)
        picked = atoms[:, support]
        coeffs = _support_lstsq(picked, x)
        residual = x - picked @ coeffs
        k += 1
        if history is not None:
            history.append(OmpState(tuple(support), residual.copy(), k))
    return support, coeffs


def omp_subset(
    dictionary: SubsetDictionary,
    x: np.ndarray,
    max_support: int,
    tol: float,
    self_index: Optional[int] = None,
    history: Optional[list] = None,
) -> SparseVector:
    """Sparse self-expressive coefficients of ``x`` over a subset dictionary.

    Parameters
    ----------
    dictionary : SubsetDictionary
        Sampled columns with their global indices.
    x : array, shape (D,)
        The point to represent.
    max_support : int
        Support cap (at most this many atoms are selected).
    tol : float
        Residual-norm stopping threshold.
    self_index : int, optional
        Global index of ``x`` itself; that column is excluded from the
        candidates, enforcing a zero diagonal in the coefficient matrix.
    history : list, optional
        If given, an OmpState is appended after every iteration.

    Returns
    -------
    SparseVector of logical length ``dictionary.n_total`` with the selected
    coefficients at their global indices.
    """
    blocked = None
    if self_index is not None:
        pos = np.searchsorted(dictionary.indices, self_index)
        if pos < dictionary.size and dictionary.indices[pos] == self_index:
            blocked = int(pos)
    admissible = dictionary.size - (1 if blocked is not None else 0)
    if admissible <= 0:
        raise ValueError("dictionary has no admissible columns")

    support, coeffs = _greedy_pursuit(
        dictionary.atoms, dictionary.atoms_t, x, max_support, tol, blocked, history
    )
    return SparseVector.from_pairs(
        dictionary.n_total,
        [(int(dictionary.indices[j]), float(c)) for j, c in zip(support, coeffs)],
    )


def omp_combination(Y: np.ndarray, x: np.ndarray, tol: float,
                    history: Optional[list] = None):
    """Weights combining the T per-subset reconstructions of one point.

    ``Y`` is D x T with column t the reconstruction from subset t (zero for
    subsets the point does not belong to; zero columns have zero correlation
    and are never selected). Runs the greedy loop for at most T iterations.
    An all-zero ``Y`` yields all-zero weights and leaves the residual at x.
    """
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2:
        raise ValueError("Y must be a D x T matrix")
    num_subsets = Y.shape[1]
    support, coeffs = _greedy_pursuit(
        Y, np.ascontiguousarray(Y.T), x, num_subsets, tol, None, history
    )
    values = np.zeros(num_subsets)
    values[support] = coeffs
    return CombinationWeights(values, np.asarray(support, dtype=np.int64))
