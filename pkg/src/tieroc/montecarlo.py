"""Monte Carlo cross-class sampling estimator.

Draws one positive score and one negative score per trial, uniformly with
replacement, and estimates the strict AUC as the fraction of trials where
the positive wins, plus the half-tie variant by crediting ties 1/2.  This
exists as a stochastic sanity oracle against the exact engine, not as a
replacement for it.

Reproducibility contract (also documented in the README): trials are split
into fixed blocks of ``BLOCK_SIZE``; block ``i`` uses a PCG64 generator
seeded with ``SeedSequence((seed mod 2**64, DOMAIN_MC, i))`` and draws the
positive indices before the negative ones.  Because the block layout is
fixed, partitioning blocks across worker threads cannot change the result.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import Dataset, group_by_score, require_both_classes

BLOCK_SIZE = 1 << 16

# Stream-domain tags keep this module's generators disjoint from the
# bootstrap's when both run under one user seed.
DOMAIN_MC = 1
DOMAIN_BOOTSTRAP = 2

_SEED_MASK = (1 << 64) - 1


def block_rng(seed: int, domain: int, index: int) -> np.random.Generator:
    """The pinned stream-derivation rule: PCG64 over (seed, domain, index)."""
    return np.random.default_rng(
        np.random.SeedSequence((seed & _SEED_MASK, domain, index))
    )


@dataclass(frozen=True)
class MonteCarloResult:
    """Sampling estimates plus the exact trial counts behind them."""

    auc_definition: float
    auc_wties: float
    n_greater: int
    n_tied: int
    n_draws: int
    seed: int


def est_auc(
    dataset: Dataset, n_draws: int, seed: int, workers: int = 1
) -> MonteCarloResult:
    """Estimate strict and half-tie AUC from ``n_draws`` random pairs.

    Deterministic given (dataset, n_draws, seed) for any ``workers``.
    Sampling draws group indices weighted by group counts, so memory stays
    O(#groups); with groups in descending score order the positive wins iff
    its group index is smaller.
    """
    if n_draws < 1:
        raise ValueError(f"n_draws must be >= 1, got {n_draws}")
    groups = group_by_score(dataset)
    require_both_classes(groups.n_pos, groups.n_neg)
    cum_pos = np.cumsum([g.pos for g in groups.groups])
    cum_neg = np.cumsum([g.neg for g in groups.groups])
    n_pos, n_neg = int(cum_pos[-1]), int(cum_neg[-1])

    def run_block(index: int) -> tuple[int, int]:
        start = index * BLOCK_SIZE
        size = min(BLOCK_SIZE, n_draws - start)
        rng = block_rng(seed, DOMAIN_MC, index)
        pos_idx = np.searchsorted(cum_pos, rng.integers(0, n_pos, size), side="right")
        neg_idx = np.searchsorted(cum_neg, rng.integers(0, n_neg, size), side="right")
        return int(np.sum(pos_idx < neg_idx)), int(np.sum(pos_idx == neg_idx))

    n_blocks = (n_draws + BLOCK_SIZE - 1) // BLOCK_SIZE
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run_block, range(n_blocks)))
    else:
        counts = [run_block(i) for i in range(n_blocks)]
    n_greater = sum(c[0] for c in counts)
    n_tied = sum(c[1] for c in counts)
    return MonteCarloResult(
        auc_definition=n_greater / n_draws,
        auc_wties=(2 * n_greater + n_tied) / (2 * n_draws),
        n_greater=n_greater,
        n_tied=n_tied,
        n_draws=n_draws,
        seed=seed,
    )
