"""Segmentation rates, surprisal by token count, and item-wise surprisal
differences between two schemes."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..corpus_io import RTRecord, group_texts, normalize_word, strip_punctuation
from ..surprisal import Key, WordSurprisal, split_sentences
from ..tokenization import Tokenizer


@dataclass(frozen=True)
class SegmentationRow:
    tokens_per_word: int
    count: int
    percent: float
    count_no_stopwords: int
    percent_no_stopwords: float


def segmentation_stats(records: Iterable[RTRecord], tokenizer: Tokenizer,
                       stopwords: Iterable[str] = ()) -> list[SegmentationRow]:
    """Share of corpus words split into k tokens, with and without
    stopwords. Punctuation is stripped first; pure-punctuation words are
    not counted."""
    stop = {normalize_word(w) for w in stopwords}
    all_counts: Counter = Counter()
    content_counts: Counter = Counter()
    for r in records:
        form = strip_punctuation(r.word)
        if not form:
            continue
        k = len(tokenizer.tokenize(form))
        all_counts[k] += 1
        if normalize_word(form) not in stop:
            content_counts[k] += 1
    n_all = sum(all_counts.values())
    n_content = sum(content_counts.values())
    rows = []
    for k in sorted(all_counts):
        rows.append(SegmentationRow(
            k, all_counts[k], 100.0 * all_counts[k] / n_all,
            content_counts[k], 100.0 * content_counts[k] / n_content if n_content else 0.0,
        ))
    return rows


@dataclass(frozen=True)
class TokenCountSummary:
    tokens_per_word: int
    count: int
    mean: float
    q1: float
    median: float
    q3: float


def surprisal_by_token_count(surprisals: Iterable[WordSurprisal], kept_only: bool = True) -> list[TokenCountSummary]:
    """Distribution of word surprisal grouped by the word's token count.
    With ``kept_only=False`` every scored in-vocabulary word is included."""
    groups: dict[int, list[float]] = defaultdict(list)
    for ws in surprisals:
        if kept_only and not ws.kept:
            continue
        if not ws.tokens or ws.oov:
            continue
        groups[ws.token_count].append(ws.surprisal_bits)
    out = []
    for k in sorted(groups):
        v = np.asarray(groups[k])
        q1, med, q3 = np.percentile(v, [25, 50, 75])
        out.append(TokenCountSummary(k, len(v), float(v.mean()), float(q1), float(med), float(q3)))
    return out


@dataclass(frozen=True)
class ItemDiff:
    text_id: str
    word_index: int
    word: str
    tokens_a: tuple[str, ...]
    tokens_b: tuple[str, ...]
    surprisal_a: float
    surprisal_b: float
    sentence: str

    @property
    def difference(self) -> float:
        return self.surprisal_a - self.surprisal_b


def sentence_lookup(records: Iterable[RTRecord]) -> dict[Key, str]:
    out = {}
    for recs in group_texts(records).values():
        for sent in split_sentences(recs):
            text = " ".join(r.word for r in sent)
            for r in sent:
                out[(r.text_id, r.word_index)] = text
    return out


def item_diff_report(a: Mapping[Key, WordSurprisal], b: Mapping[Key, WordSurprisal],
                     records: Sequence[RTRecord] | None = None) -> list[ItemDiff]:
    """Words kept under both schemes, largest absolute surprisal
    difference first (ties by text position)."""
    sentences = sentence_lookup(records) if records is not None else {}
    items = []
    for key, wa in a.items():
        wb = b.get(key)
        if wb is None or not (wa.kept and wb.kept):
            continue
        items.append(ItemDiff(key[0], key[1], wa.record.word, wa.tokens, wb.tokens,
                              wa.surprisal_bits, wb.surprisal_bits, sentences.get(key, "")))
    items.sort(key=lambda d: (-abs(d.difference), d.text_id, d.word_index))
    return items
