from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from subword_surprisal.evaluation.ranksum import exact_p, rank_sum_null, wilcoxon_rank_sum


def enumerated_p(w, n_a, n_b):
    """Two-sided p by listing every assignment of ranks to the first sample."""
    sums = [sum(c) for c in itertools.combinations(range(1, n_a + n_b + 1), n_a)]
    lower = sum(s <= w for s in sums) / len(sums)
    upper = sum(s >= w for s in sums) / len(sums)
    return min(1.0, 2 * min(lower, upper))


def test_textbook_example():
    r = wilcoxon_rank_sum([1, 2, 3], [4, 5, 6])
    assert r.W == 6 and r.U == 0
    assert r.p == pytest.approx(0.1, abs=1e-15)
    assert r.method == "exact"


def test_all_three_vs_three_assignments():
    assignments = list(itertools.combinations(range(1, 7), 3))
    assert len(assignments) == 20
    for ranks in assignments:
        a = [float(x) for x in ranks]
        b = [float(x) for x in range(1, 7) if x not in ranks]
        r = wilcoxon_rank_sum(a, b)
        assert r.W == sum(ranks)
        assert r.p == pytest.approx(enumerated_p(sum(ranks), 3, 3), abs=1e-15)


def test_identical_samples():
    assert wilcoxon_rank_sum([1, 2, 3], [1, 2, 3]).p == 1.0


def test_null_distribution_counts():
    for n_a, n_b in [(1, 1), (2, 3), (4, 4), (5, 2)]:
        dist = rank_sum_null(n_a, n_b)
        assert sum(dist) == math.comb(n_a + n_b, n_a)
        sums = [sum(c) for c in itertools.combinations(range(1, n_a + n_b + 1), n_a)]
        for s, cnt in enumerate(dist):
            assert cnt == sums.count(s)


def samples_with_u(u, n=10):
    """Two tie-free samples of size n whose first-sample U equals u."""
    ranks = list(range(1, n + 1))  # U = 0
    # shift the largest ranks of a upward one step at a time
    for _ in range(u):
        for i in range(n - 1, -1, -1):
            nxt = ranks[i] + 1
            if nxt <= 2 * n and (i == n - 1 or nxt < ranks[i + 1]):
                ranks[i] = nxt
                break
    a = [float(r) for r in ranks]
    b = [float(r) for r in range(1, 2 * n + 1) if r not in ranks]
    return a, b


@pytest.mark.parametrize("u,p", [(43, 0.63), (50, 1.0), (41, 0.53), (53, 0.85)])
def test_ten_fold_reference_values(u, p):
    a, b = samples_with_u(u)
    r = wilcoxon_rank_sum(a, b)
    assert r.U == u
    assert r.W == u + 55
    assert round(r.p, 2) == p


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=15), st.lists(st.integers(0, 6), min_size=1, max_size=15))
def test_normal_approximation_matches_scipy(a, b):
    r = wilcoxon_rank_sum(a, b)
    if r.method != "normal":
        return
    if len(set(a + b)) == 1:
        assert r.p == 1.0
        return
    ref = stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True)
    assert r.U == pytest.approx(ref.statistic)
    assert r.p == pytest.approx(ref.pvalue, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=10, unique=True),
       st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=10, unique=True))
def test_symmetry(a, b):
    ab, ba = wilcoxon_rank_sum(a, b), wilcoxon_rank_sum(b, a)
    n = len(a) + len(b)
    assert ab.W + ba.W == pytest.approx(n * (n + 1) / 2)
    assert ab.p == pytest.approx(ba.p, abs=1e-12)
    assert 0 <= ab.p <= 1


def test_exact_matches_scipy_exact():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b = rng.normal(size=7), rng.normal(size=9)
        ref = stats.mannwhitneyu(a, b, alternative="two-sided", method="exact")
        assert wilcoxon_rank_sum(a, b).p == pytest.approx(ref.pvalue, abs=1e-12)


def test_empty_rejected():
    with pytest.raises(ValueError):
        wilcoxon_rank_sum([], [1.0])


def test_exact_p_bounds():
    assert exact_p(6, 3, 3) == pytest.approx(0.1)
    assert exact_p(15, 3, 3) == pytest.approx(0.1)
    assert exact_p(10, 3, 3) == 1.0
