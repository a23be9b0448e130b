"""N-gram counting with Kneser-Ney adjusted counts.

Sentences are padded as ``<s>^(N-1) w1 .. wn </s>``. A run of begin markers
carries no information beyond "sentence start", so windows that begin with
several ``<s>`` are stored in collapsed form with a single ``<s>`` (e.g. the
5-gram ``<s> <s> <s> <s> a`` is the bigram ``<s> a``).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"
SPECIAL = (BOS, EOS, UNK)


class EmptyCountsError(ValueError):
    pass


@dataclass
class CountTrie:
    """Raw and adjusted counts for orders 1..order.

    ``raw[n-1]`` maps n-gram tuples to occurrence counts. ``adjusted[n-1]``
    holds the counts Kneser-Ney estimates from: raw counts for the highest
    order and for n-grams starting with ``<s>``, otherwise the number of
    distinct left extensions.
    """

    order: int
    raw: list[dict[tuple[str, ...], int]]
    adjusted: list[dict[tuple[str, ...], int]]

    @property
    def vocabulary(self) -> set[str]:
        return {g[0] for g in self.raw[0]} | {BOS, UNK}


def padded(tokens: Sequence[str]) -> list[str]:
    return [BOS, *tokens, EOS]


def count_ngrams(token_sentences: Iterable[Sequence[str]], order: int) -> CountTrie:
    if order < 1:
        raise ValueError("order must be >= 1")
    raw = [Counter() for _ in range(order)]
    seen_any = False
    for sent in token_sentences:
        for tok in sent:
            if tok in SPECIAL:
                raise ValueError(f"reserved token {tok!r} in input")
        seq = padded(sent)
        seen_any = True
        for i in range(1, len(seq)):
            # every n-gram ending at i that fits after the (single) <s>
            for n in range(1, min(order, i + 1) + 1):
                raw[n - 1][tuple(seq[i - n + 1:i + 1])] += 1
    if not seen_any:
        raise EmptyCountsError("no sentences to count")

    # left extensions: (n+1)-gram w+g contributes one type to g
    adjusted = [dict() for _ in range(order)]
    adjusted[order - 1] = dict(raw[order - 1])
    for n in range(order - 1, 0, -1):
        ext: dict[tuple[str, ...], int] = defaultdict(int)
        for g in raw[n]:
            ext[g[1:]] += 1
        adj = adjusted[n - 1]
        for g, c in raw[n - 1].items():
            adj[g] = c if g[0] == BOS else ext[g]
    return CountTrie(order, [dict(c) for c in raw], adjusted)
