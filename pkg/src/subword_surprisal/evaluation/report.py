"""Evaluation report: JSON document plus one CSV per figure-equivalent.

CSV columns
-----------
crossval.csv         corpus, scheme, fold, delta_loglik
surprisal_by_k.csv   corpus, scheme, tokens_per_word, count, mean, q1, median, q3
whole_vs_split.csv   corpus, scheme, subset, n_rows, n_folds, fold, delta_loglik
item_diff.csv        corpus, rank, text_id, word_index, word, scheme_a, tokens_a,
                     surprisal_a, scheme_b, tokens_b, surprisal_b, difference, sentence
segmentation.csv     corpus, scheme, tokens_per_word, count, percent,
                     count_no_stopwords, percent_no_stopwords
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, field
from typing import Any

SCHEMA_VERSION = 1
PERCENT_TOLERANCE = 0.1


@dataclass
class SchemeResult:
    n_rows: int
    delta_loglik: float
    cohens_f2: float | None
    fold_delta_loglik: list[float]
    coefficients: dict[str, dict[str, float]]
    r2_baseline: float
    r2_full: float
    rank_sum_vs_orthographic: dict[str, float] | None = None
    segmentation: list[dict[str, Any]] = field(default_factory=list)
    surprisal_by_k: list[dict[str, Any]] = field(default_factory=list)
    whole_vs_split: dict[str, dict[str, Any]] = field(default_factory=dict)


@dataclass
class CorpusResult:
    spillover: int
    n_records: int
    n_folds: int
    schemes: dict[str, SchemeResult]
    item_diff: list[dict[str, Any]] = field(default_factory=list)
    item_diff_schemes: tuple[str, str] | None = None


@dataclass
class EvaluationReport:
    seed: int
    order: int
    align: bool
    schemes: list[str]
    corpora: dict[str, CorpusResult]
    manifest: dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        corpora = {}
        for name, c in d["corpora"].items():
            schemes = {s: SchemeResult(**r) for s, r in c["schemes"].items()}
            c = dict(c, schemes=schemes)
            if c.get("item_diff_schemes"):
                c["item_diff_schemes"] = tuple(c["item_diff_schemes"])
            corpora[name] = CorpusResult(**c)
        return cls(**dict(d, corpora=corpora))

    def check_invariants(self) -> list[str]:
        """Problems that make the report invalid (empty list when valid)."""
        problems = []
        for cname, c in self.corpora.items():
            for sname, r in c.schemes.items():
                if len(r.fold_delta_loglik) != c.n_folds:
                    problems.append(f"{cname}/{sname}: {len(r.fold_delta_loglik)} fold values, expected {c.n_folds}")
                if r.segmentation:
                    for col in ("percent", "percent_no_stopwords"):
                        total = sum(row[col] for row in r.segmentation)
                        if total and abs(total - 100.0) > PERCENT_TOLERANCE:
                            problems.append(f"{cname}/{sname}: segmentation {col} sums to {total:.3f}")
        return problems


def write_json(report: EvaluationReport, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path: str | os.PathLike) -> EvaluationReport:
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported report schema {d.get('schema_version')}")
    return EvaluationReport.from_dict(d)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_csvs(report: EvaluationReport, out_dir: str | os.PathLike) -> list[str]:
    crossval, by_k, wvs, items, seg = [], [], [], [], []
    for cname, c in report.corpora.items():
        for sname, r in c.schemes.items():
            crossval += [(cname, sname, i, v) for i, v in enumerate(r.fold_delta_loglik)]
            by_k += [(cname, sname, g["tokens_per_word"], g["count"], g["mean"], g["q1"], g["median"], g["q3"])
                     for g in r.surprisal_by_k]
            for subset, res in r.whole_vs_split.items():
                if not res["deltas"]:
                    wvs.append((cname, sname, subset, res["n_rows"], res["n_folds"], "", ""))
                wvs += [(cname, sname, subset, res["n_rows"], res["n_folds"], i, v)
                        for i, v in enumerate(res["deltas"])]
            seg += [(cname, sname, s["tokens_per_word"], s["count"], s["percent"],
                     s["count_no_stopwords"], s["percent_no_stopwords"]) for s in r.segmentation]
        if c.item_diff_schemes:
            a, b = c.item_diff_schemes
            items += [(cname, rank, d["text_id"], d["word_index"], d["word"], a, " ".join(d["tokens_a"]),
                       d["surprisal_a"], b, " ".join(d["tokens_b"]), d["surprisal_b"],
                       d["surprisal_a"] - d["surprisal_b"], d["sentence"])
                      for rank, d in enumerate(c.item_diff, start=1)]
    files = {
        "crossval.csv": (("corpus", "scheme", "fold", "delta_loglik"), crossval),
        "surprisal_by_k.csv": (("corpus", "scheme", "tokens_per_word", "count", "mean", "q1", "median", "q3"), by_k),
        "whole_vs_split.csv": (("corpus", "scheme", "subset", "n_rows", "n_folds", "fold", "delta_loglik"), wvs),
        "item_diff.csv": (("corpus", "rank", "text_id", "word_index", "word", "scheme_a", "tokens_a", "surprisal_a",
                           "scheme_b", "tokens_b", "surprisal_b", "difference", "sentence"), items),
        "segmentation.csv": (("corpus", "scheme", "tokens_per_word", "count", "percent",
                              "count_no_stopwords", "percent_no_stopwords"), seg),
    }
    written = []
    for name, (header, rows) in files.items():
        path = os.path.join(out_dir, name)
        _write_csv(path, header, rows)
        written.append(path)
    return written


def render_text(report: EvaluationReport) -> str:
    """Plain-text summary tables (delta loglik, f^2, rank-sum tests)."""
    lines = []
    corpora = list(report.corpora)
    w = max([len(s) for s in report.schemes] + [13])
    lines.append("Per-token delta log-likelihood (full data)")
    lines.append(" " * (w + 2) + "".join(f"{c:>16}" for c in corpora))
    for s in report.schemes:
        vals = [report.corpora[c].schemes[s].delta_loglik if s in report.corpora[c].schemes else float("nan")
                for c in corpora]
        lines.append(f"{s:<{w}}  " + "".join(f"{v:>16.5f}" for v in vals))
    lines.append("")
    lines.append("Cohen's f^2 (full data)")
    for s in report.schemes:
        vals = []
        for c in corpora:
            r = report.corpora[c].schemes.get(s)
            vals.append(r.cohens_f2 if r and r.cohens_f2 is not None else float("nan"))
        lines.append(f"{s:<{w}}  " + "".join(f"{v:>16.5f}" for v in vals))
    tests = [(c, s, r.rank_sum_vs_orthographic) for c in corpora
             for s, r in report.corpora[c].schemes.items() if r.rank_sum_vs_orthographic]
    if tests:
        lines.append("")
        lines.append("Wilcoxon rank-sum vs orthographic (fold delta log-likelihoods)")
        lines.append(f"{'scheme':<{w}}  {'corpus':<16}{'W':>8}{'U':>8}{'p':>8}")
        for c, s, t in tests:
            lines.append(f"{s:<{w}}  {c:<16}{t['W']:>8.1f}{t['U']:>8.1f}{t['p']:>8.3f}")
    return "\n".join(lines) + "\n"
