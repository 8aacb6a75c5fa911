import numpy as np
import pytest

from pmssc import (
    ParameterError,
    Params,
    SyntheticSpec,
    generate_synthetic,
    pms_coefficients,
    subspace_preserving_error,
)


class TestSyntheticSpec:
    def test_defaults_match_protocol(self):
        spec = SyntheticSpec(points_per_subspace=100)
        assert (spec.num_subspaces, spec.subspace_dim, spec.ambient_dim) == (5, 6, 9)
        assert spec.n_points == 500

    @pytest.mark.parametrize("kw", [
        dict(points_per_subspace=0),
        dict(points_per_subspace=5, subspace_dim=10),
        dict(points_per_subspace=5, num_subspaces=0),
        dict(points_per_subspace=5, noise_sigma=-1.0),
    ])
    def test_bad_spec_rejected(self, kw):
        with pytest.raises(ParameterError):
            SyntheticSpec(**kw)


class TestGenerateSynthetic:
    def test_default_shapes_and_labels(self):
        X, labels = generate_synthetic(SyntheticSpec(points_per_subspace=100, seed=0))
        assert X.shape == (9, 500)
        assert np.array_equal(np.bincount(labels), np.full(5, 100))

    def test_unit_norm_columns(self):
        X, _ = generate_synthetic(SyntheticSpec(points_per_subspace=20, seed=1))
        assert np.allclose(np.linalg.norm(X, axis=0), 1.0, atol=1e-9)

    def test_noiseless_points_lie_in_their_subspace(self):
        spec = SyntheticSpec(points_per_subspace=15, seed=2)
        rng = np.random.default_rng(spec.seed)
        X, labels = generate_synthetic(spec)
        for k in range(spec.num_subspaces):
            basis, _ = np.linalg.qr(
                rng.standard_normal((spec.ambient_dim, spec.subspace_dim))
            )
            rng.standard_normal((spec.subspace_dim, spec.points_per_subspace))
            assert np.allclose(basis.T @ basis, np.eye(spec.subspace_dim), atol=1e-9)
            block = X[:, labels == k]
            residual = block - basis @ (basis.T @ block)
            assert np.linalg.norm(residual, axis=0).max() <= 1e-9

    def test_noise_leaves_the_subspace(self):
        spec = SyntheticSpec(points_per_subspace=15, subspace_dim=2, ambient_dim=6,
                             num_subspaces=1, noise_sigma=0.5, seed=3)
        rng = np.random.default_rng(spec.seed)
        X, _ = generate_synthetic(spec)
        basis, _ = np.linalg.qr(rng.standard_normal((6, 2)))
        residual = X - basis @ (basis.T @ X)
        assert np.linalg.norm(residual, axis=0).max() > 1e-3

    def test_deterministic_under_seed(self):
        spec = SyntheticSpec(points_per_subspace=10, seed=7)
        X1, l1 = generate_synthetic(spec)
        X2, l2 = generate_synthetic(spec)
        assert np.array_equal(X1, X2) and np.array_equal(l1, l2)

    def test_full_dimensional_single_subspace_is_trivially_preserving(self):
        # d = D: everything is one cluster, so sre must be exactly 0
        spec = SyntheticSpec(points_per_subspace=30, num_subspaces=1,
                             subspace_dim=4, ambient_dim=4, seed=4)
        X, labels = generate_synthetic(spec)
        params = Params(num_subsets=6, sampling_rate=0.5, sparsity=3,
                        num_clusters=1, seed=0, threads=1)
        result = pms_coefficients(X, params)
        assert subspace_preserving_error(result.coeffs, labels) == 0.0
