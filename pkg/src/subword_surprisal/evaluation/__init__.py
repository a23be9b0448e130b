"""Cross-validation, rank-sum comparisons and the fine-grained analyses."""

from .analyses import (ItemDiff, SegmentationRow, TokenCountSummary, item_diff_report,
                       segmentation_stats, surprisal_by_token_count)
from .crossval import (DEFAULT_FOLDS, DEFAULT_SEED, FoldAssignment, FoldTooSmallError, SubsetResult,
                       assign_folds, cross_validate, fold_deltas, whole_vs_split_analysis)
from .ranksum import RankSumResult, wilcoxon_rank_sum
from .report import EvaluationReport

__all__ = [
    "DEFAULT_FOLDS", "DEFAULT_SEED", "EvaluationReport", "FoldAssignment", "FoldTooSmallError",
    "ItemDiff", "RankSumResult", "SegmentationRow", "SubsetResult", "TokenCountSummary",
    "assign_folds", "cross_validate", "fold_deltas", "item_diff_report", "segmentation_stats",
    "surprisal_by_token_count", "whole_vs_split_analysis", "wilcoxon_rank_sum",
]
