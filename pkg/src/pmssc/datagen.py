"""Synthetic union-of-subspaces data.

Each cluster lives on a uniformly random linear subspace (orthonormalized
Gaussian basis); points are Gaussian coefficient mixes of the basis, unit
normalized, with optional isotropic noise added before normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .omp import normalize_columns
from .types import ParameterError


@dataclass(frozen=True)
class SyntheticSpec:
    """Geometry and size of a synthetic union-of-subspaces dataset."""

    points_per_subspace: int
    num_subspaces: int = 5
    subspace_dim: int = 6
    ambient_dim: int = 9
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.points_per_subspace < 1:
            raise ParameterError(
                f"points_per_subspace must be >= 1, got {self.points_per_subspace}"
            )
        if self.num_subspaces < 1:
            raise ParameterError(f"num_subspaces must be >= 1, got {self.num_subspaces}")
        if not (1 <= self.subspace_dim <= self.ambient_dim):
            raise ParameterError(
                f"subspace_dim must lie in [1, ambient_dim={self.ambient_dim}], "
                f"got {self.subspace_dim}"
            )
        if self.noise_sigma < 0.0:
            raise ParameterError(f"noise_sigma must be >= 0, got {self.noise_sigma}")

    @property
    def n_points(self) -> int:
        return self.points_per_subspace * self.num_subspaces


def generate_synthetic(spec: SyntheticSpec) -> tuple[np.ndarray, np.ndarray]:
    """Return (X, labels): X is ambient_dim x N with unit columns, labels
    follow generation order (points_per_subspace of each cluster in a row)."""
    rng = np.random.default_rng(spec.seed)
    n, d, D = spec.points_per_subspace, spec.subspace_dim, spec.ambient_dim
    blocks = []
    for _ in range(spec.num_subspaces):
        basis, _ = np.linalg.qr(rng.standard_normal((D, d)))
        points = basis @ rng.standard_normal((d, n))
        if spec.noise_sigma > 0.0:
            points = points + spec.noise_sigma * rng.standard_normal((D, n))
        blocks.append(points)
    X = normalize_columns(np.concatenate(blocks, axis=1))
    labels = np.repeat(np.arange(spec.num_subspaces, dtype=np.int64), n)
    return X, labels
