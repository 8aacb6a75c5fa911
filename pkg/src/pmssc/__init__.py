"""Multi-subset sparse self-expressive subspace clustering.

Represents every point as a sparse combination of points from several
randomly sampled subsets solved independently (and in parallel), fuses the
per-subset solutions with greedy combination weights, and clusters the
resulting affinity graph by normalized cut.
"""

from .datagen import SyntheticSpec, generate_synthetic
from .metrics import (
    ResidualDiagnostics,
    clustering_accuracy,
    connectivity,
    residual_diagnostics,
    subspace_preserving_error,
)
from .omp import OmpState, SubsetDictionary, normalize_columns, omp_combination, omp_subset
from .pipeline import (
    CoverageError,
    aggregate_reports,
    run_clustering,
    run_synthetic_trials,
)
from .pms import (
    PmsResult,
    PointSolution,
    SubsetSolution,
    build_dictionaries,
    pms_coefficients,
    reconstruct,
    solve_point,
)
from .sampling import coverage_report, generate_plan, sample_subset
from .spectral import build_affinity, normalized_laplacian, spectral_clustering
from .types import (
    ClusteringReport,
    CoeffMatrix,
    CombinationWeights,
    ParameterError,
    Params,
    SparseVector,
    SubsetPlan,
    add_sparse,
    subset_size,
    validate_params,
)

__version__ = "0.1.0"

__all__ = [
    "ClusteringReport",
    "CoeffMatrix",
    "CombinationWeights",
    "CoverageError",
    "OmpState",
    "ParameterError",
    "Params",
    "PmsResult",
    "PointSolution",
    "ResidualDiagnostics",
    "SparseVector",
    "SubsetDictionary",
    "SubsetPlan",
    "SubsetSolution",
    "SyntheticSpec",
    "add_sparse",
    "aggregate_reports",
    "build_affinity",
    "build_dictionaries",
    "clustering_accuracy",
    "connectivity",
    "coverage_report",
    "generate_plan",
    "generate_synthetic",
    "normalize_columns",
    "normalized_laplacian",
    "omp_combination",
    "omp_subset",
    "pms_coefficients",
    "reconstruct",
    "residual_diagnostics",
    "run_clustering",
    "run_synthetic_trials",
    "sample_subset",
    "solve_point",
    "spectral_clustering",
    "subset_size",
    "subspace_preserving_error",
    "validate_params",
]
