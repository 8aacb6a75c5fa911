import dataclasses

import numpy as np
import pytest

from pmssc import (
    CoverageError,
    Params,
    SyntheticSpec,
    aggregate_reports,
    generate_synthetic,
    run_clustering,
    run_synthetic_trials,
)
from pmssc.pipeline import run_mode
from pmssc.types import ClusteringReport


def small_params(**kw):
    base = dict(num_subsets=6, sampling_rate=0.4, sparsity=4, num_clusters=5,
                seed=0, threads=1)
    base.update(kw)
    return Params(**base)


def test_run_mode_flags_the_reduction_case():
    assert run_mode(small_params(num_subsets=1, sampling_rate=1.0)) == "ssc-omp-equivalent"
    assert run_mode(small_params()) == "pmssc"


def test_metrics_require_ground_truth():
    X, labels = generate_synthetic(SyntheticSpec(points_per_subspace=20, seed=0))
    report, _ = run_clustering(X, small_params())
    assert report.accuracy_pct is None and report.sre_pct is None
    assert report.connectivity is None
    report, _ = run_clustering(X, small_params(), true_labels=labels)
    assert report.accuracy_pct is not None


def test_require_coverage_raises():
    X, _ = generate_synthetic(SyntheticSpec(points_per_subspace=10, seed=1))
    for seed in range(60):
        params = small_params(num_subsets=2, sampling_rate=0.3, sparsity=2,
                              num_clusters=2, seed=seed)
        try:
            with pytest.warns(RuntimeWarning):
                run_clustering(X, params, sampling="uniform",
                               require_coverage=True)
        except CoverageError:
            return
    pytest.fail("no coverage gap found across 60 seeds")


def test_trials_use_derived_seeds():
    spec = SyntheticSpec(points_per_subspace=20, seed=4)
    params = small_params(seed=4)
    out = run_synthetic_trials(spec, params, trials=2)
    for k, report in enumerate(out["reports"]):
        X, labels = generate_synthetic(dataclasses.replace(spec, seed=4 + k))
        manual, _ = run_clustering(
            X, dataclasses.replace(params, seed=4 + k), true_labels=labels
        )
        assert np.array_equal(report.labels, manual.labels)
        assert report.accuracy_pct == manual.accuracy_pct


def test_aggregate_reports_mean_std():
    reports = [
        ClusteringReport(labels=np.array([0]), runtime_seconds=1.0,
                         accuracy_pct=80.0, sre_pct=10.0, connectivity=0.5),
        ClusteringReport(labels=np.array([0]), runtime_seconds=3.0,
                         accuracy_pct=100.0, sre_pct=30.0, connectivity=0.7),
    ]
    agg = aggregate_reports(reports)
    assert agg["accuracy_pct_mean"] == pytest.approx(90.0)
    assert agg["accuracy_pct_std"] == pytest.approx(10.0)
    assert agg["runtime_seconds_mean"] == pytest.approx(2.0)

    single = aggregate_reports(reports[:1])
    assert "accuracy_pct_std" not in single
    no_metrics = aggregate_reports(
        [ClusteringReport(labels=np.array([0]), runtime_seconds=1.0)]
    )
    assert "accuracy_pct_mean" not in no_metrics


def test_monte_carlo_accuracy_beats_chance():
    # full pipeline at the protocol's smallest size: 5 balanced clusters give
    # a 20% chance level, which must be beaten on at least 49 of 50 seeds
    wins = 0
    for seed in range(50):
        X, labels = generate_synthetic(SyntheticSpec(points_per_subspace=100,
                                                     seed=seed))
        params = Params(num_subsets=16, sampling_rate=0.3, sparsity=6,
                        num_clusters=5, seed=seed, threads=0)
        report, _ = run_clustering(X, params, true_labels=labels)
        wins += report.accuracy_pct > 20.0
    assert wins >= 49
