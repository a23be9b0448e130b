"""Wilcoxon rank-sum (Mann-Whitney) test with an exact null for small
tie-free samples and a tie- and continuity-corrected normal approximation
otherwise."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import stats

EXACT_MAX_TOTAL = 20


@dataclass(frozen=True)
class RankSumResult:
    W: float  # rank sum of the first sample
    p: float  # two-sided
    n_a: int
    n_b: int
    method: str

    @property
    def U(self) -> float:
        """Mann-Whitney U of the first sample (W minus its minimum)."""
        return self.W - self.n_a * (self.n_a + 1) / 2


@lru_cache(maxsize=None)
def rank_sum_null(n_a: int, n_b: int) -> tuple[int, ...]:
    """Number of size-n_a subsets of ranks 1..n_a+n_b for each rank sum
    0..max (dynamic programme over the ranks)."""
    total = n_a + n_b
    max_sum = sum(range(total - n_a + 1, total + 1))
    # ways[k][s]: subsets of size k with sum s among the ranks seen so far
    ways = [[0] * (max_sum + 1) for _ in range(n_a + 1)]
    ways[0][0] = 1
    for r in range(1, total + 1):
        for k in range(min(r, n_a), 0, -1):
            prev, cur = ways[k - 1], ways[k]
            for s in range(max_sum, r - 1, -1):
                if prev[s - r]:
                    cur[s] += prev[s - r]
    return tuple(ways[n_a])


def exact_p(w: int, n_a: int, n_b: int) -> float:
    dist = rank_sum_null(n_a, n_b)
    total = math.comb(n_a + n_b, n_a)
    lower = sum(dist[: w + 1]) / total
    upper = sum(dist[w:]) / total
    return min(1.0, 2.0 * min(lower, upper))


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float]) -> RankSumResult:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n_a, n_b = len(a), len(b)
    if n_a == 0 or n_b == 0:
        raise ValueError("both samples must be non-empty")
    combined = np.concatenate([a, b])
    ranks = stats.rankdata(combined)
    w = float(ranks[:n_a].sum())
    n = n_a + n_b
    _, tie_sizes = np.unique(combined, return_counts=True)
    has_ties = bool(np.any(tie_sizes > 1))

    if n <= EXACT_MAX_TOTAL and not has_ties:
        return RankSumResult(w, exact_p(int(round(w)), n_a, n_b), n_a, n_b, "exact")

    mean = n_a * (n + 1) / 2
    tie_term = float(np.sum(tie_sizes ** 3 - tie_sizes)) / (n * (n - 1)) if n > 1 else 0.0
    var = n_a * n_b / 12 * ((n + 1) - tie_term)
    if var <= 0:
        return RankSumResult(w, 1.0, n_a, n_b, "normal")
    z = (abs(w - mean) - 0.5) / math.sqrt(var)
    p = min(1.0, 2.0 * stats.norm.sf(max(z, 0.0)))
    return RankSumResult(w, p, n_a, n_b, "normal")
