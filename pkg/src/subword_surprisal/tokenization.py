"""Orthographic, BPE and lexicon-driven morphological tokenization.

Tokens of a :class:`TokenizedWord` are stored without any boundary marker;
the first token is the word-initial one. The marker is only added when a
word is flattened into an LM token stream (see :func:`stream_tokens`).
"""

from __future__ import annotations

import enum
import os
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .corpus_io import CorpusError, Sentence, _read_lines, normalize_word

GPT2_MARKER = "Ġ"  # "Ġ", the GPT-2 byte-level rendering of a leading space


class ConfigurationError(ValueError):
    pass


class Scheme(enum.Enum):
    ORTHOGRAPHIC = "orthographic"
    BPE = "bpe"
    MORPHOLOGICAL = "morphological"

    @classmethod
    def parse(cls, name: str) -> "Scheme":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise ConfigurationError(f"unknown scheme {name!r}; valid schemes: {valid}") from None


@dataclass(frozen=True)
class TokenizedWord:
    word: str
    scheme: Scheme
    tokens: tuple[str, ...]

    def __post_init__(self):
        if not self.tokens or any(not t for t in self.tokens):
            raise ValueError(f"{self.word!r}: empty token list or empty token")
        if self.scheme is Scheme.ORTHOGRAPHIC and len(self.tokens) != 1:
            raise ValueError("orthographic words are single tokens")

    @property
    def initial_flags(self) -> tuple[bool, ...]:
        return (True,) + (False,) * (len(self.tokens) - 1)

    def __len__(self):
        return len(self.tokens)

    def detokenize(self) -> str:
        return "".join(self.tokens)


@dataclass(frozen=True)
class MergeTable:
    merges: tuple[tuple[str, str], ...]
    word_initial_marker: str | None = GPT2_MARKER

    def __post_init__(self):
        if len(set(self.merges)) != len(self.merges):
            raise ValueError("merge table contains a duplicate pair")
        object.__setattr__(self, "_ranks", {pair: i for i, pair in enumerate(self.merges)})

    @property
    def ranks(self) -> Mapping[tuple[str, str], int]:
        return self._ranks

    def __len__(self):
        return len(self.merges)

    def extended(self, more: Iterable[tuple[str, str]]) -> "MergeTable":
        return MergeTable(self.merges + tuple(more), self.word_initial_marker)


@dataclass(frozen=True)
class SegmentationLexicon:
    entries: Mapping[str, tuple[str, ...]]

    def __post_init__(self):
        for word, morphs in self.entries.items():
            if not morphs or not "".join(morphs):
                raise ValueError(f"lexicon entry {word!r} has no morphs")

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self):
        return len(self.entries)

    def is_concatenative(self, word: str) -> bool:
        """Whether the morphs spell the surface word exactly (no canonical
        respelling such as "commune ity" for "community")."""
        return "".join(self.entries[word]) == word


def _merge_pair(symbols: list[str], left: str, right: str) -> list[str]:
    out = []
    i = 0
    n = len(symbols)
    while i < n:
        if i < n - 1 and symbols[i] == left and symbols[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def bpe_symbols(word: str, merges: MergeTable) -> list[str]:
    """Greedy BPE segmentation including the marker symbol, if any."""
    marker = merges.word_initial_marker
    symbols = ([marker] if marker else []) + list(word)
    ranks = merges.ranks
    while len(symbols) > 1:
        best = None
        for pair in zip(symbols, symbols[1:]):
            r = ranks.get(pair)
            if r is not None and (best is None or r < best):
                best = r
        if best is None:
            break
        symbols = _merge_pair(symbols, *merges.merges[best])
    return symbols


def apply_bpe(word: str, merges: MergeTable) -> TokenizedWord:
    if not word or any(c.isspace() for c in word):
        raise ValueError(f"cannot BPE-encode {word!r}")
    symbols = bpe_symbols(word, merges)
    marker = merges.word_initial_marker
    if marker:
        if symbols[0] == marker:
            # marker never merged: it belongs to the first real symbol
            symbols = [symbols[1]] + symbols[2:]
        else:
            symbols[0] = symbols[0][len(marker):]
    return TokenizedWord(word, Scheme.BPE, tuple(symbols))


def train_bpe(corpus: Sequence[Sentence], num_merges: int,
              word_initial_marker: str | None = GPT2_MARKER) -> MergeTable:
    """Learn merges by repeatedly fusing the most frequent adjacent pair.
    Ties go to the lexicographically smallest (left, right)."""
    if num_merges < 0:
        raise ValueError("num_merges must be non-negative")
    word_counts = Counter(w for s in corpus for w in s.words)
    if not word_counts:
        raise CorpusError("cannot train BPE on an empty corpus")
    prefix = [word_initial_marker] if word_initial_marker else []
    vocab = [(prefix + list(w), c) for w, c in sorted(word_counts.items())]

    merges: list[tuple[str, str]] = []
    while len(merges) < num_merges:
        pairs: Counter = Counter()
        for symbols, c in vocab:
            for pair in zip(symbols, symbols[1:]):
                pairs[pair] += c
        if not pairs:
            break
        top = max(pairs.values())
        best = min(p for p, c in pairs.items() if c == top)
        merges.append(best)
        vocab = [(_merge_pair(s, *best) if len(s) > 1 else s, c) for s, c in vocab]
    return MergeTable(tuple(merges), word_initial_marker)


def segment_morph(word: str, lexicon: SegmentationLexicon, lowercase: bool = True) -> TokenizedWord:
    key = normalize_word(word) if lowercase else word
    morphs = lexicon.entries.get(key)
    if morphs is None and key != word:
        morphs = lexicon.entries.get(word)
    return TokenizedWord(word, Scheme.MORPHOLOGICAL, tuple(morphs) if morphs else (key,))


@dataclass(frozen=True)
class Tokenizer:
    """A scheme bound to its resource; tokenizes single words."""

    scheme: Scheme
    merges: MergeTable | None = None
    lexicon: SegmentationLexicon | None = None
    marker: str | None = GPT2_MARKER

    def __post_init__(self):
        if self.scheme is Scheme.BPE and self.merges is None:
            raise ConfigurationError("BPE tokenization needs a merge table")
        if self.scheme is Scheme.MORPHOLOGICAL and self.lexicon is None:
            raise ConfigurationError("morphological tokenization needs a segmentation lexicon")
        if self.scheme is Scheme.BPE:
            object.__setattr__(self, "marker", self.merges.word_initial_marker)
        object.__setattr__(self, "_cache", {})

    def tokenize(self, word: str) -> TokenizedWord:
        cached = self._cache.get(word)
        if cached is None:
            if self.scheme is Scheme.ORTHOGRAPHIC:
                cached = TokenizedWord(word, Scheme.ORTHOGRAPHIC, (normalize_word(word),))
            elif self.scheme is Scheme.BPE:
                cached = apply_bpe(word, self.merges)
            else:
                cached = segment_morph(word, self.lexicon)
            self._cache[word] = cached
        return cached

    def stream_tokens(self, tw: TokenizedWord) -> list[str]:
        """Tokens as they appear in an LM stream, boundary marker included."""
        if self.scheme is Scheme.ORTHOGRAPHIC or not self.marker:
            return list(tw.tokens)
        return [self.marker + tw.tokens[0], *tw.tokens[1:]]

    def tokenize_sentence(self, words: Iterable[str]) -> list[str]:
        out: list[str] = []
        for w in words:
            out.extend(self.stream_tokens(self.tokenize(w)))
        return out


def tokenize_corpus(corpus: Iterable[Sentence], scheme: Scheme,
                    merges: MergeTable | None = None,
                    lexicon: SegmentationLexicon | None = None,
                    marker: str | None = GPT2_MARKER) -> list[list[str]]:
    tok = Tokenizer(scheme, merges=merges, lexicon=lexicon, marker=marker)
    return [tok.tokenize_sentence(s.words) for s in corpus]


def load_merges(path: str | os.PathLike, word_initial_marker: str | None = GPT2_MARKER) -> MergeTable:
    merges = []
    for line_no, line in enumerate(_read_lines(path), start=1):
        if line_no == 1 and line.startswith("#"):
            continue
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CorpusError(f"{path}:{line_no}: expected 'left right'")
        merges.append((parts[0], parts[1]))
    return MergeTable(tuple(merges), word_initial_marker)


def write_merges(table: MergeTable, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("#version: 0.2\n")
        for left, right in table.merges:
            fh.write(f"{left} {right}\n")


def load_lexicon(path: str | os.PathLike) -> SegmentationLexicon:
    entries = {}
    for line_no, line in enumerate(_read_lines(path), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            word, morphs = line.split("\t")
        except ValueError:
            raise CorpusError(f"{path}:{line_no}: expected 'word<TAB>morph morph ...'") from None
        if not morphs.split():
            raise CorpusError(f"{path}:{line_no}: no morphs for {word!r}")
        entries[word] = tuple(morphs.split())
    return SegmentationLexicon(entries)


def write_token_stream(streams: Iterable[Sequence[str]], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tokens in streams:
            fh.write(" ".join(tokens) + "\n")


def read_token_stream(path: str | os.PathLike) -> list[list[str]]:
    return [line.split() for line in _read_lines(path) if line.strip()]
