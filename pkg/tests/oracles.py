"""Independent reference implementations used to pin expected test values.

These deliberately avoid the production code paths: the split oracle does an
exhaustive search with exact Fraction arithmetic, and the safe-sample oracle
simulates the accept-resample loop at the level of Bernoulli flags.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def exact_best_split(X, y, idx, cols, min_leaf: int = 1):
    """Brute-force best-Gini split: enumerate every (column, threshold) pair.

    Minimizing weighted child Gini equals maximizing S_l/n_l + S_r/n_r with S
    the sum of squared class counts; Fractions keep the comparison exact. Ties
    break on lowest column, then lowest threshold.
    """
    best_score = None
    best = None
    for c in sorted(int(c) for c in cols):
        values = sorted(set(float(v) for v in X[idx, c]))
        for a, b in zip(values, values[1:]):
            thr = (a + b) / 2.0
            if thr >= b:
                thr = a
            mask = X[idx, c] <= thr
            n_left = int(mask.sum())
            n_right = idx.size - n_left
            if n_left < min_leaf or n_right < min_leaf:
                continue
            n1_left = int(y[idx[mask]].sum())
            n0_left = n_left - n1_left
            n1_right = int(y[idx[~mask]].sum())
            n0_right = n_right - n1_right
            score = Fraction(n0_left**2 + n1_left**2, n_left) + Fraction(
                n0_right**2 + n1_right**2, n_right
            )
            if best_score is None or score > best_score:
                best_score = score
                best = (c, thr)
            # Equal scores: the ascending (column, threshold) scan order means
            # the incumbent already carries the preferred tie-break.
    return best


FLAG_ORDER = ("country", "company_type", "revenue", "employees", "ewma")


def mc_permutation_marginals(weights, trials: int, seed: int = 0) -> dict[str, float]:
    """Monte-Carlo marginals of the safe generator's accept-resample loop.

    Models one sample where every feature permutation is effective: flags are
    redrawn until at least one fires; returns, per feature, the fraction of
    accepted passes in which that feature's flag was set.
    """
    probabilities = np.array([
        weights.country_of_origin,
        weights.company_type,
        weights.revenue,
        weights.number_of_employees,
        weights.ewma,
    ])
    rng = np.random.default_rng(seed)
    pending = trials
    fired = np.zeros(len(FLAG_ORDER), dtype=np.int64)
    while pending > 0:
        flags = rng.random((pending, probabilities.size)) < probabilities
        accepted = flags.any(axis=1)
        fired += flags[accepted].sum(axis=0)
        pending -= int(accepted.sum())
    return {name: fired[i] / trials for i, name in enumerate(FLAG_ORDER)}


def mc_safe_ewma_fraction(weights, trials: int, seed: int = 0) -> float:
    return mc_permutation_marginals(weights, trials, seed)["ewma"]
