"""Weighted random subset sampling with between-subset down-weighting.

Subsets are drawn sequentially because each subset's weights depend on the
previous draws; this is O(T*N) work and never the bottleneck. The returned
plan is immutable and shareable across threads.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .types import Params, SubsetPlan, subset_size

# Multiplier applied to the weight of every index selected into a subset
# before the next subset is drawn. Selection in several subsets compounds.
WEIGHT_UPDATE = 0.1


def sample_subset(weights: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` distinct indices with probability proportional to weight.

    Successive-draw semantics: each draw consumes exactly one uniform from
    ``rng`` and picks index j with probability w_j / sum(remaining w), then
    removes j from the pool. Returns the indices in draw order.
    """
    w = np.array(weights, dtype=np.float64)
    if w.ndim != 1:
        raise ValueError("weights must be 1-d")
    if size > w.size:
        raise ValueError(f"sample size {size} exceeds population {w.size}")
    if np.any(w <= 0.0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be positive and finite")

    chosen = np.empty(size, dtype=np.int64)
    for k in range(size):
        cum = np.cumsum(w)
        u = rng.random() * cum[-1]
        j = int(np.searchsorted(cum, u, side="right"))
        # cum[j-1] <= u < cum[j] implies w[j] > 0; only the float corner where
        # u rounds up to the total mass can land out of range
        if j >= w.size:
            j = int(np.flatnonzero(w)[-1])
        chosen[k] = j
        w[j] = 0.0
    return chosen


def generate_plan(
    n_points: int,
    params: Params,
    rng: Optional[np.random.Generator] = None,
    weight_update: float = WEIGHT_UPDATE,
) -> SubsetPlan:
    """Draw the T index subsets, updating weights between draws.

    All weights start at 1. After subset t is drawn, the weight of every
    index selected into it is multiplied by ``weight_update`` before subset
    t+1 is drawn (and after the last subset, so final weights always equal
    weight_update ** membership count). ``weight_update=1.0`` gives plain
    uniform sampling without replacement, used for the sampling ablation.
    """
    if rng is None:
        rng = np.random.default_rng(params.seed)
    size = subset_size(params.sampling_rate, n_points)

    weights = np.ones(n_points)
    subsets = []
    for _ in range(params.num_subsets):
        drawn = sample_subset(weights, size, rng)
        weights[drawn] *= weight_update
        subsets.append(np.sort(drawn))

    members: list[list[int]] = [[] for _ in range(n_points)]
    for t, subset in enumerate(subsets):
        for i in subset:
            members[int(i)].append(t)
    membership = tuple(np.asarray(m, dtype=np.int64) for m in members)
    return SubsetPlan(tuple(subsets), weights, membership)


def coverage_report(plan: SubsetPlan) -> np.ndarray:
    """Indices of points that belong to no subset.

    Such points get an all-zero coefficient vector and end up as isolated
    affinity nodes; callers decide whether that is a warning or an error.
    """
    return np.asarray(
        [i for i, m in enumerate(plan.membership) if m.size == 0], dtype=np.int64
    )
