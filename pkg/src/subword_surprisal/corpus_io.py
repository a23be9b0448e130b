"""Readers and writers for training corpora, reading-time corpora and
unigram frequency tables."""

from __future__ import annotations

import csv
import math
import os
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

RT_COLUMNS = ("text_id", "word_index", "word", "rt_ms")


class CorpusError(ValueError):
    """Raised for malformed or invalid corpus files."""


class EmptyCorpusError(CorpusError):
    pass


class CorpusDecodeError(CorpusError):
    def __init__(self, path, line_no, reason):
        super().__init__(f"{path}:{line_no}: not valid UTF-8 ({reason})")
        self.line_no = line_no


class SchemaError(CorpusError):
    pass


class RecordValidationError(CorpusError):
    pass


def normalize_word(word: str) -> str:
    """Canonical form used for frequency counts and the orthographic LM."""
    return word.lower()


def strip_punctuation(word: str) -> str:
    """Drop leading and trailing non-letter characters ("end." -> "end")."""
    start, end = 0, len(word)
    while start < end and not word[start].isalpha():
        start += 1
    while end > start and not word[end - 1].isalpha():
        end -= 1
    return word[start:end]


def is_alphabetic(word: str) -> bool:
    """True if every character is an ASCII letter."""
    return bool(word) and all(("a" <= c <= "z") or ("A" <= c <= "Z") for c in word)


@dataclass(frozen=True)
class Sentence:
    text_id: str
    words: tuple[str, ...]

    def __post_init__(self):
        if not self.words:
            raise CorpusError(f"sentence {self.text_id!r} has no words")
        for w in self.words:
            if not w or any(c.isspace() for c in w):
                raise CorpusError(f"sentence {self.text_id!r}: bad word {w!r}")


@dataclass(frozen=True)
class RTRecord:
    text_id: str
    word_index: int
    word: str
    rt_ms: float


@dataclass(frozen=True)
class FrequencyTable:
    counts: Mapping[str, int]
    total: int

    def __post_init__(self):
        if self.total != sum(self.counts.values()):
            raise CorpusError("frequency table total does not match counts")
        if any(c < 1 for c in self.counts.values()):
            raise CorpusError("frequency table holds a non-positive count")

    def __contains__(self, word: str) -> bool:
        return normalize_word(word) in self.counts

    def count(self, word: str) -> int:
        return self.counts.get(normalize_word(word), 0)

    def log_count(self, word: str) -> float:
        """Natural log of the raw count; -inf for unseen words."""
        c = self.count(word)
        return math.log(c) if c else float("-inf")

    def sorted_items(self) -> list[tuple[str, int]]:
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))


def _read_lines(path: str | os.PathLike) -> list[str]:
    with open(path, "rb") as fh:
        raw = fh.read()
    lines = raw.split(b"\n")
    out = []
    for i, line in enumerate(lines, start=1):
        try:
            out.append(line.decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise CorpusDecodeError(path, i, exc.reason) from None
    if out and out[-1] == "":
        out.pop()
    return out


def load_training_corpus(path: str | os.PathLike) -> list[Sentence]:
    """One sentence per line, whitespace-delimited words. Blank lines are
    skipped; sentence ids are their 0-based ordinal among non-blank lines."""
    sentences = []
    for line in _read_lines(path):
        words = line.split()
        if words:
            sentences.append(Sentence(f"s{len(sentences)}", tuple(words)))
    if not sentences:
        raise EmptyCorpusError(f"{path}: training corpus is empty")
    return sentences


def write_training_corpus(sentences: Iterable[Sentence], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for s in sentences:
            fh.write(" ".join(s.words) + "\n")


def load_rt_corpus(path: str | os.PathLike) -> list[RTRecord]:
    lines = _read_lines(path)
    if not lines:
        raise SchemaError(f"{path}: missing header")
    reader = csv.DictReader(lines, delimiter="\t", quoting=csv.QUOTE_NONE)
    missing = [c for c in RT_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")

    records = []
    seen = set()
    for row_no, row in enumerate(reader, start=2):
        try:
            idx = int(row["word_index"])
            rt = float(row["rt_ms"])
        except (TypeError, ValueError):
            raise RecordValidationError(f"{path}: row {row_no}: unparseable word_index/rt_ms") from None
        word = row["word"] or ""
        if not word or any(c.isspace() for c in word):
            raise RecordValidationError(f"{path}: row {row_no}: bad word {word!r}")
        if not (rt > 0) or math.isinf(rt):
            raise RecordValidationError(f"{path}: row {row_no}: rt_ms must be positive, got {row['rt_ms']}")
        if idx < 0:
            raise RecordValidationError(f"{path}: row {row_no}: negative word_index")
        key = (row["text_id"], idx)
        if key in seen:
            raise RecordValidationError(f"{path}: row {row_no}: duplicate (text_id, word_index) {key}")
        seen.add(key)
        records.append(RTRecord(row["text_id"], idx, word, rt))
    return records


def write_rt_corpus(records: Iterable[RTRecord], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(RT_COLUMNS) + "\n")
        for r in records:
            fh.write(f"{r.text_id}\t{r.word_index}\t{r.word}\t{r.rt_ms!r}\n")


def group_texts(records: Iterable[RTRecord]) -> dict[str, list[RTRecord]]:
    """Records per text, in word_index order; texts keep first-seen order."""
    texts: dict[str, list[RTRecord]] = {}
    for r in records:
        texts.setdefault(r.text_id, []).append(r)
    for recs in texts.values():
        recs.sort(key=lambda r: r.word_index)
    return texts


def build_frequency_table(corpus: Iterable[Sentence], lowercase: bool = True) -> FrequencyTable:
    norm = normalize_word if lowercase else (lambda w: w)
    counts = Counter(norm(w) for s in corpus for w in s.words)
    if not counts:
        raise EmptyCorpusError("cannot count an empty corpus")
    return FrequencyTable(dict(counts), sum(counts.values()))


def write_frequency_table(table: FrequencyTable, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for word, count in table.sorted_items():
            fh.write(f"{word}\t{count}\n")


def load_frequency_table(path: str | os.PathLike) -> FrequencyTable:
    counts = {}
    for line_no, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        try:
            word, count = line.split("\t")
            counts[word] = int(count)
        except ValueError:
            raise CorpusError(f"{path}:{line_no}: expected 'word<TAB>count'") from None
    return FrequencyTable(counts, sum(counts.values()))
