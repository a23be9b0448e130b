"""Word-level surprisal from subword tokens, exclusion rules, and spillover
feature rows for reading-time regression."""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .corpus_io import FrequencyTable, RTRecord, group_texts, is_alphabetic, strip_punctuation
from .lm import BOS, NGramModel
from .tokenization import Scheme, Tokenizer, TokenizedWord

LN2 = math.log(2.0)
SENTENCE_FINAL = ".!?"
CLOSERS = "\"')]}’”"

Key = tuple[str, int]


class ExclusionReason(str, enum.Enum):
    ADJACENT_PUNCTUATION = "adjacent-punctuation"
    NON_ALPHABETIC = "non-alphabetic"
    OOV = "OOV"
    OTHER_SCHEME = "excluded-in-other-scheme"


@dataclass(frozen=True)
class WordSurprisal:
    record: RTRecord
    scheme: Scheme
    tokens: tuple[str, ...]
    token_surprisals: tuple[float, ...]
    oov: bool = False
    excluded: ExclusionReason | None = None

    @property
    def key(self) -> Key:
        return (self.record.text_id, self.record.word_index)

    @property
    def token_count(self) -> int:
        return len(self.tokens)

    @property
    def surprisal_bits(self) -> float:
        return math.fsum(self.token_surprisals)

    @property
    def kept(self) -> bool:
        return self.excluded is None


@dataclass(frozen=True)
class FeatureRow:
    text_id: str
    word_index: int
    rt_ms: float
    surprisal: tuple[float, ...]
    length: tuple[float, ...]
    log_freq: tuple[float, ...]
    token_count: int = 1
    fold_id: int = -1

    @property
    def key(self) -> Key:
        return (self.text_id, self.word_index)

    @property
    def spillover(self) -> int:
        return len(self.surprisal) - 1

    def feature(self, name: str) -> float:
        """Value of a named predictor: s<k>, len<k> or f<k> for lag k."""
        kind = name.rstrip("0123456789")
        lag = int(name[len(kind):])
        return {"s": self.surprisal, "len": self.length, "f": self.log_freq}[kind][lag]


def feature_names(spillover: int, include_surprisal: bool = True) -> list[str]:
    names = []
    for k in range(spillover + 1):
        if include_surprisal:
            names.append(f"s{k}")
        names += [f"len{k}", f"f{k}"]
    return names


def baseline_and_full(spillover: int) -> tuple[list[str], list[str]]:
    return feature_names(spillover, False), feature_names(spillover, True)


def ends_sentence(word: str) -> bool:
    core = word.rstrip(CLOSERS)
    return bool(core) and core[-1] in SENTENCE_FINAL


def split_sentences(records: Sequence[RTRecord]) -> list[list[RTRecord]]:
    """Split one text into sentences after words ending in . ! or ?"""
    out, cur = [], []
    for r in records:
        cur.append(r)
        if ends_sentence(r.word):
            out.append(cur)
            cur = []
    if cur:
        out.append(cur)
    return out


def word_surprisal(model: NGramModel, tokenizer: Tokenizer, tokenized: TokenizedWord,
                   context: list[str], record: RTRecord | None = None) -> WordSurprisal:
    """Sum of -log2 P(token | history) over the word's tokens. ``context``
    is extended in place with the word's stream tokens."""
    stream = tokenizer.stream_tokens(tokenized)
    bits = []
    oov = False
    for tok in stream:
        if tok not in model or tok == BOS:
            oov = True
        bits.append(-model.logprob(tok, context) / LN2)
        context.append(tok)
    if record is None:
        record = RTRecord("", 0, tokenized.word, 1.0)
    return WordSurprisal(record, tokenizer.scheme, tokenized.tokens, tuple(bits), oov,
                         ExclusionReason.OOV if oov else None)


def score_text(model: NGramModel, tokenizer: Tokenizer, records: Sequence[RTRecord]) -> list[WordSurprisal]:
    """Surprisal for every word of one text; history resets per sentence.
    Punctuation is stripped before tokenization; words that are pure
    punctuation get no tokens and are marked non-alphabetic."""
    out = []
    order = model.order
    for sentence in split_sentences(records):
        context = [BOS]
        for r in sentence:
            form = strip_punctuation(r.word)
            if not form:
                out.append(WordSurprisal(r, tokenizer.scheme, (), (), False, ExclusionReason.NON_ALPHABETIC))
                continue
            out.append(word_surprisal(model, tokenizer, tokenizer.tokenize(form), context, r))
            del context[:-order]
    return out


def apply_exclusions(records: Sequence[RTRecord], oov: Sequence[bool] | None = None,
                     freq_table: FrequencyTable | None = None) -> list[ExclusionReason | None]:
    """Exclusion flag per word of one text, in order.

    Precedence when several rules fire: non-alphabetic, then adjacency to
    punctuation (the previous word ends in a non-letter or the next word
    starts with one), then out-of-vocabulary (LM or frequency table).
    """
    flags: list[ExclusionReason | None] = []
    n = len(records)
    for i, r in enumerate(records):
        w = r.word
        if not is_alphabetic(w):
            flags.append(ExclusionReason.NON_ALPHABETIC)
        elif (i > 0 and not records[i - 1].word[-1].isalpha()) or \
                (i + 1 < n and not records[i + 1].word[0].isalpha()):
            flags.append(ExclusionReason.ADJACENT_PUNCTUATION)
        elif (oov is not None and oov[i]) or (freq_table is not None and w not in freq_table):
            flags.append(ExclusionReason.OOV)
        else:
            flags.append(None)
    return flags


def compute_surprisals(model: NGramModel, tokenizer: Tokenizer, records: Iterable[RTRecord],
                       freq_table: FrequencyTable | None = None) -> dict[Key, WordSurprisal]:
    """Score and flag a whole RT corpus under one scheme."""
    out: dict[Key, WordSurprisal] = {}
    for recs in group_texts(records).values():
        scored = score_text(model, tokenizer, recs)
        flags = apply_exclusions(recs, [ws.oov for ws in scored], freq_table)
        for ws, flag in zip(scored, flags):
            out[ws.key] = replace(ws, excluded=flag)
    return out


def align_schemes(per_scheme: Mapping[Scheme, Mapping[Key, WordSurprisal]]) -> dict[Scheme, dict[Key, WordSurprisal]]:
    """Keep a word only if every scheme keeps it."""
    schemes = list(per_scheme)
    aligned = {s: dict(per_scheme[s]) for s in schemes}
    keys = set().union(*(m.keys() for m in per_scheme.values()))
    for key in keys:
        if all(key in per_scheme[s] and per_scheme[s][key].kept for s in schemes):
            continue
        for s in schemes:
            ws = aligned[s].get(key)
            if ws is not None and ws.kept:
                aligned[s][key] = replace(ws, excluded=ExclusionReason.OTHER_SCHEME)
    return aligned


def build_feature_rows(records: Iterable[RTRecord], surprisals: Mapping[Key, WordSurprisal],
                       freq_table: FrequencyTable, spillover: int) -> list[FeatureRow]:
    """One row per kept word whose ``spillover`` predecessors in the same
    text are kept too. Lag k features come from the word k positions back."""
    if spillover < 0:
        raise ValueError("spillover must be >= 0")
    rows = []
    for recs in group_texts(records).values():
        kept = [surprisals.get((r.text_id, r.word_index)) for r in recs]
        kept = [ws if ws is not None and ws.kept else None for ws in kept]
        for i in range(spillover, len(recs)):
            window = kept[i - spillover:i + 1][::-1]
            if any(ws is None for ws in window):
                continue
            words = [ws.record.word for ws in window]
            rows.append(FeatureRow(
                recs[i].text_id, recs[i].word_index, recs[i].rt_ms,
                tuple(ws.surprisal_bits for ws in window),
                tuple(float(len(w)) for w in words),
                tuple(freq_table.log_count(w) for w in words),
                token_count=window[0].token_count,
            ))
    rows.sort(key=lambda r: r.key)
    return rows


def write_feature_rows(rows: Sequence[FeatureRow], path: str | os.PathLike) -> None:
    k = rows[0].spillover if rows else 0
    header = ["text_id", "word_index", "rt_ms", "fold"]
    for lag in range(k + 1):
        header += [f"s{lag}", f"len{lag}", f"f{lag}"]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(header) + "\n")
        for r in rows:
            vals = [r.text_id, str(r.word_index), repr(r.rt_ms), str(r.fold_id)]
            for lag in range(k + 1):
                vals += [repr(r.surprisal[lag]), repr(r.length[lag]), repr(r.log_freq[lag])]
            fh.write("\t".join(vals) + "\n")


def read_feature_rows(path: str | os.PathLike) -> list[FeatureRow]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        k = (len(header) - 4) // 3 - 1
        rows = []
        for line in fh:
            v = line.rstrip("\n").split("\t")
            lags = [tuple(float(v[4 + 3 * j + off]) for j in range(k + 1)) for off in range(3)]
            rows.append(FeatureRow(v[0], int(v[1]), float(v[2]), *lags, fold_id=int(v[3])))
    return rows
