"""K-fold cross-validated delta log-likelihood with folds shared across
tokenization schemes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from ..regression import design_matrix, fit_matrix
from ..surprisal import FeatureRow

DEFAULT_FOLDS = 10
DEFAULT_SEED = 20231206


class FoldTooSmallError(ValueError):
    pass


@dataclass(frozen=True)
class FoldAssignment:
    folds: Mapping[Hashable, int]
    seed: int
    n_folds: int = DEFAULT_FOLDS

    def __getitem__(self, key) -> int:
        return self.folds[key]

    def restrict(self, keys: Iterable[Hashable]) -> "FoldAssignment":
        return FoldAssignment({k: self.folds[k] for k in keys}, self.seed, self.n_folds)

    def sizes(self) -> list[int]:
        out = [0] * self.n_folds
        for f in self.folds.values():
            out[f] += 1
        return out


def assign_folds(keys: Iterable[Hashable], seed: int = DEFAULT_SEED, n_folds: int = DEFAULT_FOLDS) -> FoldAssignment:
    """Uniformly random, size-balanced folds; depends only on the key set
    and the seed (not on the order keys arrive in)."""
    ordered = sorted(set(keys))
    perm = np.random.default_rng(seed).permutation(len(ordered))
    return FoldAssignment({ordered[j]: i % n_folds for i, j in enumerate(perm)}, seed, n_folds)


def _columns(names: Sequence[str], wanted: Sequence[str]) -> list[int]:
    return [0] + [1 + list(names).index(w) for w in wanted]


def fold_deltas(rows: Sequence[FeatureRow], folds: FoldAssignment,
                baseline: Sequence[str], full: Sequence[str]) -> list[float]:
    """Held-out per-token delta log-likelihood for each fold."""
    X, y = design_matrix(rows, full)
    base_cols = _columns(full, baseline)
    fold_of = np.array([folds[r.key] for r in rows])
    k = len(full) + 1
    out = []
    for f in range(folds.n_folds):
        test = fold_of == f
        train = ~test
        n_train, n_test = int(train.sum()), int(test.sum())
        if n_test == 0 or n_train <= k:
            raise FoldTooSmallError(f"fold {f}: {n_train} training / {n_test} test rows "
                                    f"for {k} parameters")
        ff = fit_matrix(X[train], y[train])
        fb = fit_matrix(X[train][:, base_cols], y[train])
        ll_full = ff.loglik_on(X[test], y[test])
        ll_base = fb.loglik_on(X[test][:, base_cols], y[test])
        out.append((ll_full - ll_base) / n_test)
    return out


def cross_validate(rows_per_scheme: Mapping[object, Sequence[FeatureRow]], folds: FoldAssignment,
                   baseline: Sequence[str], full: Sequence[str],
                   require_shared_rows: bool = True) -> dict[object, list[float]]:
    """Per-fold held-out delta log-likelihood for every scheme. All schemes
    see the same train/test split for a given fold."""
    key_sets = {s: frozenset(r.key for r in rows) for s, rows in rows_per_scheme.items()}
    if require_shared_rows and len(set(key_sets.values())) > 1:
        raise ValueError("schemes do not share the same rows; enable alignment mode")
    return {s: fold_deltas(rows, folds, baseline, full) for s, rows in rows_per_scheme.items()}


def _feasible(rows: Sequence[FeatureRow], folds: FoldAssignment, n_params: int) -> bool:
    sizes = folds.sizes()
    n = len(rows)
    return all(s >= 1 and n - s > n_params for s in sizes)


@dataclass
class SubsetResult:
    subset: str
    n_rows: int
    n_folds: int
    deltas: list[float] = field(default_factory=list)


def whole_vs_split_analysis(rows_per_scheme: Mapping[object, Sequence[FeatureRow]], folds: FoldAssignment,
                            baseline: Sequence[str], full: Sequence[str],
                            token_counts: Mapping[object, Mapping[Hashable, int]] | None = None,
                            ) -> dict[object, dict[str, SubsetResult]]:
    """Cross-validate separately on unsplit (one token) and split words.

    Token counts come from each row unless ``token_counts`` maps scheme ->
    key -> count. A subset too small for the configured fold count is rerun
    with the largest feasible count (recorded in ``n_folds``; 0 = skipped).
    """
    n_params = len(full) + 1
    out: dict[object, dict[str, SubsetResult]] = {}
    for scheme, rows in rows_per_scheme.items():
        counts = token_counts.get(scheme) if token_counts else None
        ntok = [counts[r.key] if counts is not None else r.token_count for r in rows]
        subsets = {
            "whole": [r for r, c in zip(rows, ntok) if c == 1],
            "split": [r for r, c in zip(rows, ntok) if c > 1],
        }
        out[scheme] = {}
        for name, sub in subsets.items():
            res = SubsetResult(name, len(sub), 0)
            keys = [r.key for r in sub]
            candidates = itertools.chain(
                [folds.restrict(keys)],
                (assign_folds(keys, folds.seed, k) for k in range(folds.n_folds - 1, 1, -1)))
            for fa in candidates:
                if sub and _feasible(sub, fa, n_params):
                    res.n_folds = fa.n_folds
                    res.deltas = fold_deltas(sub, fa, baseline, full)
                    break
            out[scheme][name] = res
    return out
