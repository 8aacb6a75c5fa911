import numpy as np
import pytest

from pmssc import Params, coverage_report, generate_plan, sample_subset
from pmssc.types import SubsetPlan

from oracles import replay_weighted_draws


def params(T, rate, s=1, seed=0):
    return Params(num_subsets=T, sampling_rate=rate, sparsity=s,
                  num_clusters=2, seed=seed)


class TestSampleSubset:
    def test_exhaustive_draw_returns_everything(self):
        rng = np.random.default_rng(0)
        drawn = sample_subset(np.ones(8), 8, rng)
        assert sorted(drawn.tolist()) == list(range(8))

    def test_two_of_two(self):
        drawn = sample_subset(np.ones(2), 2, np.random.default_rng(3))
        assert sorted(drawn.tolist()) == [0, 1]

    def test_heavy_weight_dominates(self):
        # Monte-Carlo check of the successive-draw probability: the first
        # index holds ~99.99% of the mass, so it must win >= 99% of draws.
        w = np.full(20, 1e-4)
        w[0] = 1.0
        rng = np.random.default_rng(42)
        hits = sum(sample_subset(w, 1, rng)[0] == 0 for _ in range(100_000))
        assert hits >= 99_000

    def test_oversized_sample_rejected(self):
        with pytest.raises(ValueError, match="exceeds"):
            sample_subset(np.ones(3), 4, np.random.default_rng(0))

    def test_nonpositive_weights_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            sample_subset(np.array([1.0, 0.0]), 1, np.random.default_rng(0))

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_linear_scan_replay(self, seed):
        # same seeded stream, independent implementation
        w = np.random.default_rng(100 + seed).random(30) + 0.1
        ours = sample_subset(w, 12, np.random.default_rng(seed))
        theirs = replay_weighted_draws(w, 12, np.random.default_rng(seed))
        assert ours.tolist() == theirs


class TestGeneratePlan:
    def test_full_sample_single_subset(self):
        plan = generate_plan(4, params(1, 1.0))
        assert plan.subsets[0].tolist() == [0, 1, 2, 3]
        assert np.allclose(plan.final_weights, 0.1)
        assert all(m.tolist() == [0] for m in plan.membership)

    def test_replay_with_same_stream(self):
        n, size = 10, 5
        plan = generate_plan(n, params(2, 0.5, seed=7))
        rng = np.random.default_rng(7)
        w = [1.0] * n
        for t in range(2):
            drawn = replay_weighted_draws(w, size, rng)
            assert sorted(drawn) == plan.subsets[t].tolist()
            for j in drawn:
                w[j] *= 0.1

    def test_first_subset_weights_downscaled(self):
        plan = generate_plan(10, params(2, 0.5, seed=1))
        first, second = set(plan.subsets[0]), set(plan.subsets[1])
        for i in range(10):
            expected = 0.1 ** ((i in first) + (i in second))
            assert plan.final_weights[i] == pytest.approx(expected)

    def test_paper_scale_sizes(self):
        plan = generate_plan(500, params(16, 0.3))
        assert plan.num_subsets == 16
        assert all(s.size == 150 for s in plan.subsets)
        assert all(np.unique(s).size == 150 for s in plan.subsets)

    @pytest.mark.parametrize("seed", range(4))
    def test_weight_monotonicity(self, seed):
        plan = generate_plan(60, params(6, 0.4, seed=seed))
        counts = np.zeros(60, dtype=int)
        for s in plan.subsets:
            counts[s] += 1
        assert np.allclose(plan.final_weights, 0.1**counts)

    def test_membership_is_inverse_of_subsets(self):
        plan = generate_plan(40, params(5, 0.3, seed=3))
        for i, m in enumerate(plan.membership):
            assert m.tolist() == [t for t, s in enumerate(plan.subsets) if i in s]

    def test_deterministic_for_fixed_seed(self):
        a = generate_plan(80, params(4, 0.25, seed=11))
        b = generate_plan(80, params(4, 0.25, seed=11))
        assert all(np.array_equal(x, y) for x, y in zip(a.subsets, b.subsets))
        assert np.array_equal(a.final_weights, b.final_weights)

    def test_uniform_mode_keeps_weights_flat(self):
        plan = generate_plan(30, params(3, 0.5, seed=2), weight_update=1.0)
        assert np.allclose(plan.final_weights, 1.0)


class TestCoverage:
    def test_full_plan_covers_everything(self):
        plan = generate_plan(6, params(1, 1.0))
        assert coverage_report(plan).size == 0

    def test_uncovered_point_is_reported(self):
        subsets = (np.array([0, 1]), np.array([0, 2]))
        membership = (np.array([0, 1]), np.array([0]), np.array([1]), np.array([], dtype=np.int64))
        plan = SubsetPlan(subsets, np.ones(4), membership)
        assert coverage_report(plan).tolist() == [3]

    def test_weighted_sampling_rarely_misses_at_paper_scale(self):
        # delta*T = 4.8 plus the 0.1 down-weighting: misses should be rare
        misses = 0
        for seed in range(50):
            plan = generate_plan(500, params(16, 0.3, seed=seed))
            misses += coverage_report(plan).size > 0
        assert misses <= 1
