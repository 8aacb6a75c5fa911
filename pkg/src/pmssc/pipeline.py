"""End-to-end runs: coefficients -> affinity -> spectral clustering ->
metrics, plus the multi-trial synthetic protocol.

The reported runtime spans coefficient computation through spectral
clustering only; dataset generation, metric evaluation, and file I/O are
excluded so timings compare solver work.
"""

from __future__ import annotations

import dataclasses
import time
from typing import Optional

import numpy as np

from .datagen import SyntheticSpec, generate_synthetic
from .metrics import (
    clustering_accuracy,
    connectivity,
    residual_diagnostics,
    subspace_preserving_error,
)
from .pms import PmsResult, pms_coefficients
from .spectral import build_affinity, spectral_clustering
from .types import ClusteringReport, Params


class CoverageError(RuntimeError):
    """Raised when coverage is required but some points are in no subset."""


def run_mode(params: Params) -> str:
    if params.num_subsets == 1 and params.sampling_rate == 1.0:
        return "ssc-omp-equivalent"
    return "pmssc"


def run_clustering(
    X: np.ndarray,
    params: Params,
    true_labels: Optional[np.ndarray] = None,
    sampling: str = "weighted",
    require_coverage: bool = False,
    emit_residuals: bool = False,
) -> tuple[ClusteringReport, PmsResult]:
    """Run the full pipeline on one dataset.

    Metrics that need ground truth are filled only when ``true_labels`` is
    given. Residual diagnostics are collected when ``emit_residuals`` is set.
    """
    start = time.perf_counter()
    result = pms_coefficients(X, params, sampling=sampling)
    if require_coverage and result.uncovered.size:
        raise CoverageError(
            f"{result.uncovered.size} point(s) covered by no subset: "
            f"{result.uncovered.tolist()[:10]}"
        )
    affinity = build_affinity(result.coeffs)
    labels = spectral_clustering(affinity, params.num_clusters, params.seed)
    runtime = time.perf_counter() - start

    report = ClusteringReport(
        labels=labels,
        runtime_seconds=runtime,
        mode=run_mode(params),
        sampling=sampling,
        params=params,
    )
    if true_labels is not None:
        true_labels = np.asarray(true_labels, dtype=np.int64)
        report.accuracy_pct = clustering_accuracy(labels, true_labels)
        report.sre_pct = subspace_preserving_error(result.coeffs, true_labels)
        report.connectivity = connectivity(affinity, true_labels, params.num_clusters)
    if emit_residuals:
        report.residuals = residual_diagnostics(
            result.data, result.plan, result.points, result.coeffs
        )
    return report, result


METRIC_KEYS = ("accuracy_pct", "sre_pct", "connectivity", "runtime_seconds")


def aggregate_reports(reports: list[ClusteringReport]) -> dict:
    """Mean (and, beyond one trial, standard deviation) of every metric."""
    out: dict = {"trials": len(reports)}
    for key in METRIC_KEYS:
        values = [getattr(r, key) for r in reports if getattr(r, key) is not None]
        if not values:
            continue
        out[f"{key}_mean"] = float(np.mean(values))
        if len(reports) > 1:
            out[f"{key}_std"] = float(np.std(values))
    return out


def run_synthetic_trials(
    spec: SyntheticSpec,
    params: Params,
    trials: int = 1,
    sampling: str = "weighted",
    baseline: bool = False,
) -> dict:
    """Repeat the synthetic pipeline with derived seeds and aggregate.

    Trial k uses seed + k for both data generation and the solver. With
    ``baseline`` the single-subset full-rate configuration (plain greedy
    sparse self-expression) runs on the same data for side-by-side numbers.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    main_reports: list[ClusteringReport] = []
    base_reports: list[ClusteringReport] = []
    for k in range(trials):
        trial_spec = dataclasses.replace(spec, seed=spec.seed + k)
        trial_params = dataclasses.replace(params, seed=params.seed + k)
        X, labels = generate_synthetic(trial_spec)
        report, _ = run_clustering(
            X, trial_params, true_labels=labels, sampling=sampling
        )
        main_reports.append(report)
        if baseline:
            base_params = dataclasses.replace(
                trial_params, num_subsets=1, sampling_rate=1.0
            )
            base_report, _ = run_clustering(
                X, base_params, true_labels=labels, sampling=sampling
            )
            base_reports.append(base_report)

    out = {"pmssc": aggregate_reports(main_reports), "reports": main_reports}
    if baseline:
        out["baseline"] = aggregate_reports(base_reports)
        out["baseline_reports"] = base_reports
    return out
