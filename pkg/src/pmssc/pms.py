"""Multi-subset self-expressive coefficients: the per-point solve and the
parallel map over all points.

For every point i the pipeline solves one OMP problem per subset containing
i, reconstructs the point from each subset's coefficients, fits combination
weights over those reconstructions with a second OMP, and fuses the
per-subset coefficient vectors with the combination weights into the final
column c_i of the coefficient matrix.

All randomness is consumed while sampling the subset plan, before the
parallel phase; the per-point solve is a pure function of immutable inputs,
so the output is identical for any thread count.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .omp import SubsetDictionary, normalize_columns, omp_combination, omp_subset
from .sampling import WEIGHT_UPDATE, coverage_report, generate_plan
from .types import (
    CoeffMatrix,
    CombinationWeights,
    Params,
    SparseVector,
    SubsetPlan,
    add_sparse,
    validate_params,
)


@dataclass(frozen=True)
class SubsetSolution:
    """One point's solution against one subset dictionary."""

    point: int
    subset: int
    coeffs: SparseVector       # global index space, support inside the subset
    reconstruction: np.ndarray
    residual_norm: float


@dataclass(frozen=True)
class PointSolution:
    """Fused coefficients of one point plus per-subset diagnostics."""

    point: int
    coeffs: SparseVector
    combination: CombinationWeights
    subset_solutions: tuple[SubsetSolution, ...]
    residual_norm: float       # ||x_i - X c_i||_2 in normalized space


@dataclass(frozen=True)
class PmsResult:
    """Coefficient matrix plus everything needed for diagnostics."""

    coeffs: CoeffMatrix
    plan: SubsetPlan
    points: tuple[PointSolution, ...]
    uncovered: np.ndarray
    data: np.ndarray           # the column-normalized D x N matrix actually used


def reconstruct(X: np.ndarray, coeffs: SparseVector) -> np.ndarray:
    """Sparse matrix-vector product X @ coeffs; empty coeffs give zero."""
    X = np.asarray(X)
    if coeffs.length != X.shape[1]:
        raise IndexError(
            f"coefficient length {coeffs.length} does not match {X.shape[1]} columns"
        )
    if coeffs.nnz == 0:
        return np.zeros(X.shape[0])
    return X[:, coeffs.indices] @ coeffs.values


def build_dictionaries(X: np.ndarray, plan: SubsetPlan) -> list[SubsetDictionary]:
    """Materialize each subset's columns as a compact D x m dictionary."""
    n = X.shape[1]
    return [SubsetDictionary(X[:, subset], subset, n) for subset in plan.subsets]


def solve_point(
    i: int,
    X: np.ndarray,
    plan: SubsetPlan,
    params: Params,
    dictionaries: Optional[list[SubsetDictionary]] = None,
) -> PointSolution:
    """Solve one point: per-subset OMP, combination OMP, coefficient fusion.

    ``X`` must already be column-normalized. A point in no subset gets zero
    coefficients and keeps its own norm as the residual.
    """
    if dictionaries is None:
        dictionaries = build_dictionaries(X, plan)
    x = X[:, i]
    num_subsets = plan.num_subsets
    n = X.shape[1]
    if plan.membership[i].size == 0:
        warnings.warn(
            f"point {i} is in no subset; its coefficients are zero",
            RuntimeWarning,
            stacklevel=2,
        )

    subset_solutions = []
    Y = np.zeros((X.shape[0], num_subsets))
    for t in plan.membership[i]:
        t = int(t)
        coeffs = omp_subset(
            dictionaries[t], x, params.sparsity, params.epsilon, self_index=i
        )
        y = reconstruct(X, coeffs)
        Y[:, t] = y
        subset_solutions.append(
            SubsetSolution(i, t, coeffs, y, float(np.linalg.norm(x - y)))
        )

    combination = omp_combination(Y, x, params.epsilon)
    fused = add_sparse(
        [sol.coeffs.scaled(combination.values[sol.subset]) for sol in subset_solutions],
        n,
    )
    residual_norm = float(np.linalg.norm(x - Y @ combination.values))
    return PointSolution(i, fused, combination, tuple(subset_solutions), residual_norm)


def pms_coefficients(
    X: np.ndarray,
    params: Params,
    sampling: str = "weighted",
) -> PmsResult:
    """Compute the fused coefficient matrix for every point, in parallel.

    Normalizes columns, samples the subset plan sequentially from
    ``params.seed``, then maps :func:`solve_point` over all points. The
    result is identical for any thread count; ``params.threads = 0`` uses
    one worker per CPU.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError("X must be a D x N matrix")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite entries")
    n = X.shape[1]
    validate_params(params, n)
    if sampling not in ("weighted", "uniform"):
        raise ValueError(f"unknown sampling mode {sampling!r}")

    X = normalize_columns(X)
    rng = np.random.default_rng(params.seed)
    weight_update = WEIGHT_UPDATE if sampling == "weighted" else 1.0
    plan = generate_plan(n, params, rng, weight_update=weight_update)

    uncovered = coverage_report(plan)
    if uncovered.size:
        warnings.warn(
            f"{uncovered.size} point(s) not covered by any subset "
            f"(indices {uncovered.tolist()[:10]}{'...' if uncovered.size > 10 else ''}); "
            "their coefficients are zero",
            RuntimeWarning,
            stacklevel=2,
        )

    dictionaries = build_dictionaries(X, plan)

    def solve(i: int) -> PointSolution:
        return solve_point(i, X, plan, params, dictionaries)

    workers = params.threads if params.threads > 0 else (os.cpu_count() or 1)
    if workers == 1:
        points = [solve(i) for i in range(n)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(solve, range(n)))

    coeffs = CoeffMatrix([p.coeffs for p in points])
    return PmsResult(coeffs, plan, tuple(points), uncovered, X)
