"""Interpolated modified Kneser-Ney estimation, stored in backoff form.

Probabilities follow the Chen & Goodman modified-KN recursion with the
conventions of KenLM's ``lmplz``: ``<unk>`` is a zeroton that only receives
interpolation mass, the unigram level interpolates with a uniform
distribution over the vocabulary minus ``<s>``, and ``<s>`` itself is never
predicted. Because the stored probabilities are already interpolated, the
backoff weight of a context equals its interpolation weight.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .counts import BOS, EOS, UNK, CountTrie

log = logging.getLogger(__name__)

FALLBACK_DISCOUNT = 0.75


@dataclass(frozen=True)
class Discounts:
    """Discounts for adjusted counts 1, 2 and 3+ at one order."""

    d1: float
    d2: float
    d3: float
    fallback: bool = False

    def __call__(self, count: int) -> float:
        if count <= 0:
            return 0.0
        return self.d1 if count == 1 else self.d2 if count == 2 else self.d3

    @classmethod
    def from_count_of_counts(cls, n1: int, n2: int, n3: int, n4: int,
                             fallback: float = FALLBACK_DISCOUNT, order: int | None = None) -> "Discounts":
        """D_k = k - (k+1) Y n_{k+1} / n_k with Y = n1 / (n1 + 2 n2)."""
        if n1 > 0 and n2 > 0 and n3 > 0:
            y = n1 / (n1 + 2 * n2)
            d = (1 - 2 * y * n2 / n1, 2 - 3 * y * n3 / n2, 3 - 4 * y * n4 / n3)
            if all(0 <= dk <= k for k, dk in enumerate(d, start=1)):
                return cls(*d)
            reason = f"discounts {d} out of range"
        else:
            reason = f"count-of-counts n1..n3 = {n1}, {n2}, {n3}"
        log.warning("order %s: %s; using fixed discount %.2f", order, reason, fallback)
        return cls(fallback, fallback, fallback, fallback=True)


@dataclass
class NGramModel:
    """Backoff n-gram model. ``prob`` and ``backoff`` hold natural logs."""

    order: int
    prob: dict[tuple[str, ...], float]
    backoff: dict[tuple[str, ...], float]
    discounts: list[Discounts] = field(default_factory=list)

    def __post_init__(self):
        self.vocabulary = frozenset(g[0] for g in self.prob if len(g) == 1) | {BOS}
        if UNK not in self.vocabulary:
            raise ValueError("model has no <unk> unigram")

    @property
    def predictable(self) -> list[str]:
        """Tokens that can follow a context (the vocabulary minus ``<s>``)."""
        return sorted(self.vocabulary - {BOS})

    def __contains__(self, token: str) -> bool:
        return token in self.vocabulary

    def counts_per_order(self) -> list[int]:
        sizes = [0] * self.order
        for g in self.prob:
            sizes[len(g) - 1] += 1
        return sizes

    def _query(self, token: str, context: Sequence[str]) -> tuple[float, int]:
        if token == BOS:
            raise ValueError("<s> is never predicted")
        vocab = self.vocabulary
        w = token if token in vocab else UNK
        keep = self.order - 1
        ctx = tuple(t if t in vocab else UNK for t in context[len(context) - keep:]) if keep else ()
        prob, backoff = self.prob, self.backoff
        acc = 0.0
        for start in range(len(ctx) + 1):
            h = ctx[start:]
            lp = prob.get(h + (w,))
            if lp is not None:
                return acc + lp, len(h) + 1
            acc += backoff.get(h, 0.0)
        raise AssertionError("unreachable: every vocabulary item has a unigram")

    def logprob(self, token: str, context: Sequence[str] = ()) -> float:
        """ln P(token | context); only the last order-1 context tokens matter."""
        return self._query(token, context)[0]

    def matched_order(self, token: str, context: Sequence[str] = ()) -> int:
        """Length of the longest stored n-gram used to answer the query."""
        return self._query(token, context)[1]

    def sentence_logprob(self, tokens: Sequence[str]) -> float:
        seq = [BOS, *tokens, EOS]
        return sum(self.logprob(seq[i], seq[:i]) for i in range(1, len(seq)))


def logprob(model: NGramModel, token: str, context: Sequence[str] = ()) -> float:
    return model.logprob(token, context)


def estimate_discounts(counts: CountTrie, fallback: float = FALLBACK_DISCOUNT) -> list[Discounts]:
    out = []
    for n, adj in enumerate(counts.adjusted, start=1):
        coc = [0] * 5
        for c in adj.values():
            if c < 5:
                coc[c] += 1
        out.append(Discounts.from_count_of_counts(*coc[1:5], fallback=fallback, order=n))
    return out


def estimate(counts: CountTrie, discounts: list[Discounts] | None = None,
             fallback: float = FALLBACK_DISCOUNT) -> NGramModel:
    if not counts.adjusted or not counts.adjusted[0]:
        raise ValueError("cannot estimate from empty counts")
    if discounts is None:
        discounts = estimate_discounts(counts, fallback)

    interp: list[dict[tuple[str, ...], float]] = []
    gammas: list[dict[tuple[str, ...], float]] = []
    for n, adj in enumerate(counts.adjusted, start=1):
        disc = discounts[n - 1]
        denom: dict[tuple[str, ...], int] = defaultdict(int)
        mass: dict[tuple[str, ...], float] = defaultdict(float)
        for g, a in adj.items():
            denom[g[:-1]] += a
            mass[g[:-1]] += disc(a)
        gamma = {h: mass[h] / denom[h] for h in denom}
        probs = {}
        if n == 1:
            # uniform over the vocabulary minus <s>, which includes <unk>
            uniform = gamma[()] / (len(adj) + (UNK not in adj))
            for g, a in adj.items():
                probs[g] = (a - disc(a)) / denom[()] + uniform
            probs.setdefault((UNK,), uniform)
        else:
            lower = interp[-1]
            for g, a in adj.items():
                h = g[:-1]
                probs[g] = (a - disc(a)) / denom[h] + gamma[h] * lower[g[1:]]
        interp.append(probs)
        gammas.append(gamma)

    prob = {}
    for level in interp:
        for g, p in level.items():
            prob[g] = math.log(p) if p > 0 else float("-inf")
    prob[(BOS,)] = prob.get((BOS,), float("-inf"))
    backoff = {}
    for n in range(1, counts.order):
        for h, gm in gammas[n].items():
            if h[-1] in (EOS, UNK):
                continue
            backoff[h] = math.log(gm) if gm > 0 else float("-inf")
    return NGramModel(counts.order, prob, backoff, list(discounts))
