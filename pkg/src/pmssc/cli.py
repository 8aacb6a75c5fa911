"""Command-line interface.

Subcommands: ``cluster`` runs the pipeline on a matrix file, ``synth`` runs
repeated synthetic experiments, ``eval`` scores precomputed labels (and
optionally a coefficient matrix), and ``sweep`` runs a hyperparameter grid
and emits one aggregable CSV table.

All randomness is traceable to --seed. The PMSSC_THREADS environment
variable supplies a default worker count; the --threads flag wins.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
from itertools import product
from pathlib import Path

import numpy as np

from . import io as pio
from .datagen import SyntheticSpec
from .metrics import clustering_accuracy, connectivity, subspace_preserving_error
from .pipeline import METRIC_KEYS, run_clustering, run_synthetic_trials
from .spectral import build_affinity
from .types import ClusteringReport, Params, SparseVector, CoeffMatrix


def _threads_default() -> int:
    env = os.environ.get("PMSSC_THREADS")
    return int(env) if env else 0


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("solver parameters")
    group.add_argument("--num-subsets", type=int, default=16, metavar="T",
                       help="number of sampled subsets (default 16)")
    group.add_argument("--sampling-rate", type=float, default=0.3, metavar="R",
                       help="fraction of points per subset, in (0,1] (default 0.3)")
    group.add_argument("--sparsity", type=int, default=6, metavar="S",
                       help="max support size per subset solve (default 6)")
    group.add_argument("--epsilon", type=float, default=1e-6,
                       help="residual stopping threshold (default 1e-6)")
    group.add_argument("--seed", type=int, default=0,
                       help="seed for sampling and k-means (default 0)")
    group.add_argument("--threads", type=int, default=None,
                       help="worker threads, 0 = auto (default: PMSSC_THREADS or 0)")
    group.add_argument("--sampling", choices=["weighted", "uniform"],
                       default="weighted",
                       help="subset sampling scheme (default weighted)")


def _params_from_args(args, num_clusters: int) -> Params:
    threads = args.threads if args.threads is not None else _threads_default()
    return Params(
        num_subsets=args.num_subsets,
        sampling_rate=args.sampling_rate,
        sparsity=args.sparsity,
        num_clusters=num_clusters,
        epsilon=args.epsilon,
        seed=args.seed,
        threads=threads,
    )


def _print_report(report: ClusteringReport) -> None:
    print(f"mode: {report.mode}")
    print(f"runtime_seconds: {report.runtime_seconds:.3f}")
    for key in ("accuracy_pct", "sre_pct", "connectivity"):
        value = getattr(report, key)
        if value is not None:
            print(f"{key}: {value:.4f}")


def cmd_cluster(config: pio.RunConfig) -> ClusteringReport:
    """Load -> coefficients -> affinity -> clustering -> metrics -> report."""
    X = pio.load_matrix(config.input_path, layout=config.layout)
    true_labels = None
    if config.labels_path:
        true_labels, mapping = pio.load_labels(config.labels_path)
        if any(orig != dense for orig, dense in mapping.items()):
            print(f"labels densified: {mapping}")
    report, _ = run_clustering(
        X,
        config.params,
        true_labels=true_labels,
        sampling=config.sampling,
        require_coverage=config.require_coverage,
        emit_residuals=config.emit_residuals,
    )
    if config.output_path:
        labels_path = config.save_labels_path or str(
            Path(config.output_path).with_suffix(".labels.txt")
        )
        pio.save_labels(report.labels, labels_path)
        report.labels_path = labels_path
        pio.save_report(report, config.output_path)
        print(f"report written to {config.output_path}")
    elif config.save_labels_path:
        pio.save_labels(report.labels, config.save_labels_path)
        report.labels_path = config.save_labels_path
    return report


def _cli_cluster(args) -> int:
    config = pio.RunConfig(
        params=_params_from_args(args, args.clusters),
        input_path=args.input,
        labels_path=args.labels,
        output_path=args.output,
        save_labels_path=args.save_labels,
        layout=args.layout,
        sampling=args.sampling,
        require_coverage=args.require_coverage,
        emit_residuals=args.emit_residuals,
    )
    _print_report(cmd_cluster(config))
    return 0


def _synth_spec_from_args(args, seed: int) -> SyntheticSpec:
    return SyntheticSpec(
        points_per_subspace=args.points_per_subspace,
        num_subspaces=args.subspaces,
        subspace_dim=args.subspace_dim,
        ambient_dim=args.ambient_dim,
        noise_sigma=args.noise_sigma,
        seed=seed,
    )


def _print_aggregate(name: str, agg: dict) -> None:
    print(f"[{name}] trials: {agg['trials']}")
    for key in METRIC_KEYS:
        mean = agg.get(f"{key}_mean")
        if mean is None:
            continue
        std = agg.get(f"{key}_std")
        extra = f" +- {std:.4f}" if std is not None else ""
        print(f"[{name}] {key}: {mean:.4f}{extra}")


def cmd_synth(args) -> int:
    spec = _synth_spec_from_args(args, args.seed)
    clusters = args.clusters if args.clusters is not None else args.subspaces
    params = _params_from_args(args, clusters)
    result = run_synthetic_trials(
        spec, params, trials=args.trials, sampling=args.sampling,
        baseline=args.baseline,
    )
    _print_aggregate("pmssc", result["pmssc"])
    if args.baseline:
        _print_aggregate("ssc-omp", result["baseline"])
    if args.output:
        pairs: dict = {"schema": "pmssc-synth-v1", "sampling": args.sampling,
                       "points_per_subspace": spec.points_per_subspace,
                       "num_subspaces": spec.num_subspaces,
                       "subspace_dim": spec.subspace_dim,
                       "ambient_dim": spec.ambient_dim,
                       "noise_sigma": spec.noise_sigma,
                       "num_subsets": params.num_subsets,
                       "sampling_rate": params.sampling_rate,
                       "sparsity": params.sparsity,
                       "epsilon": params.epsilon,
                       "clusters": params.num_clusters,
                       "seed": params.seed}
        for key, value in result["pmssc"].items():
            pairs[f"pmssc_{key}"] = value
        if args.baseline:
            for key, value in result["baseline"].items():
                pairs[f"ssc_omp_{key}"] = value
        pio.write_key_values(pairs, args.output)
        print(f"report written to {args.output}")
    return 0


def _coeff_matrix_from_dense(dense: np.ndarray) -> CoeffMatrix:
    if dense.shape[0] != dense.shape[1]:
        raise ValueError(f"coefficient matrix must be square, got {dense.shape}")
    return CoeffMatrix([SparseVector.from_dense(dense[:, i])
                        for i in range(dense.shape[1])])


def cmd_eval(args) -> int:
    true_labels, mapping = pio.load_labels(args.true_labels)
    clusters = args.clusters if args.clusters is not None else int(true_labels.max()) + 1
    report = ClusteringReport(labels=true_labels, runtime_seconds=0.0, mode="eval")
    if args.est_labels:
        est_labels, _ = pio.load_labels(args.est_labels)
        report.labels = est_labels
        report.accuracy_pct = clustering_accuracy(est_labels, true_labels)
    if args.coeffs:
        # file row i holds the coefficient vector of point i (save_matrix layout)
        C = _coeff_matrix_from_dense(pio.load_matrix(args.coeffs))
        report.sre_pct = subspace_preserving_error(C, true_labels)
        report.connectivity = connectivity(build_affinity(C), true_labels, clusters)
    _print_report(report)
    if args.output:
        pio.save_report(report, args.output)
        print(f"report written to {args.output}")
    return 0


def _parse_grid(text, cast):
    return [cast(tok) for tok in text.split(",")] if text else None


def cmd_sweep(args) -> int:
    t_grid = _parse_grid(args.t_grid, int) or [args.num_subsets]
    delta_grid = _parse_grid(args.delta_grid, float) or [args.sampling_rate]
    s_grid = _parse_grid(args.s_grid, int) or [args.sparsity]
    n_grid = _parse_grid(args.n_grid, int) or [args.points_per_subspace]

    clusters = args.clusters if args.clusters is not None else args.subspaces
    fieldnames = ["points_per_subspace", "num_subsets", "sampling_rate", "sparsity",
                  "trials", "status", "error"]
    for key in METRIC_KEYS:
        fieldnames += [f"{key}_mean", f"{key}_std"]

    rows = []
    for n, T, rate, s in product(n_grid, t_grid, delta_grid, s_grid):
        row = {"points_per_subspace": n, "num_subsets": T, "sampling_rate": rate,
               "sparsity": s, "trials": args.trials}
        try:
            spec = dataclasses.replace(
                _synth_spec_from_args(args, args.seed), points_per_subspace=n
            )
            params = dataclasses.replace(
                _params_from_args(args, clusters),
                num_subsets=T, sampling_rate=rate, sparsity=s,
            )
            result = run_synthetic_trials(
                spec, params, trials=args.trials, sampling=args.sampling
            )
            row["status"] = "ok"
            for key, value in result["pmssc"].items():
                if key != "trials":
                    row[key] = format(value, ".17g")
        except Exception as exc:
            row["status"] = "error"
            row["error"] = str(exc)
        rows.append(row)

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.output:
            out.close()
            print(f"table written to {args.output} ({len(rows)} cells)")
    return 0


def _add_synth_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("synthetic data")
    group.add_argument("--points-per-subspace", type=int, default=100, metavar="N")
    group.add_argument("--subspaces", type=int, default=5)
    group.add_argument("--subspace-dim", type=int, default=6)
    group.add_argument("--ambient-dim", type=int, default=9)
    group.add_argument("--noise-sigma", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmssc",
        description="Multi-subset sparse self-expressive subspace clustering",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cluster = sub.add_parser("cluster", help="cluster a matrix file")
    p_cluster.add_argument("--input", required=True, help="matrix file (CSV or binary)")
    p_cluster.add_argument("--labels", help="ground-truth labels (enables metrics)")
    p_cluster.add_argument("--clusters", type=int, required=True)
    p_cluster.add_argument("--layout", choices=[pio.ROWS_ARE_POINTS,
                                                pio.COLUMNS_ARE_POINTS],
                           default=pio.ROWS_ARE_POINTS)
    p_cluster.add_argument("--output", help="report path (labels saved alongside)")
    p_cluster.add_argument("--save-labels", help="where to write estimated labels")
    p_cluster.add_argument("--require-coverage", action="store_true",
                           help="fail if any point is covered by no subset")
    p_cluster.add_argument("--emit-residuals", action="store_true",
                           help="include residual diagnostics in the report")
    _add_param_flags(p_cluster)
    p_cluster.set_defaults(func=_cli_cluster)

    p_synth = sub.add_parser("synth", help="run repeated synthetic experiments")
    _add_synth_flags(p_synth)
    p_synth.add_argument("--clusters", type=int, default=None,
                         help="default: number of subspaces")
    p_synth.add_argument("--trials", type=int, default=1)
    p_synth.add_argument("--baseline", action="store_true",
                         help="also run the single-subset full-rate baseline")
    p_synth.add_argument("--output", help="aggregate report path")
    _add_param_flags(p_synth)
    p_synth.set_defaults(func=cmd_synth)

    p_eval = sub.add_parser("eval", help="score precomputed labels/coefficients")
    p_eval.add_argument("--true-labels", required=True)
    p_eval.add_argument("--est-labels")
    p_eval.add_argument("--coeffs",
                        help="square coefficient matrix; file row i = vector of point i")
    p_eval.add_argument("--clusters", type=int, default=None)
    p_eval.add_argument("--output")
    p_eval.set_defaults(func=cmd_eval)

    p_sweep = sub.add_parser("sweep", help="grid over T/rate/sparsity/n on synthetic data")
    _add_synth_flags(p_sweep)
    p_sweep.add_argument("--clusters", type=int, default=None)
    p_sweep.add_argument("--trials", type=int, default=1)
    p_sweep.add_argument("--t-grid", help="comma list of subset counts")
    p_sweep.add_argument("--delta-grid", help="comma list of sampling rates")
    p_sweep.add_argument("--s-grid", help="comma list of sparsity values")
    p_sweep.add_argument("--n-grid", help="comma list of points-per-subspace values")
    p_sweep.add_argument("--output", help="CSV table path (default: stdout)")
    _add_param_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error [{type(exc).__module__}.{type(exc).__name__}]: {exc}",
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
