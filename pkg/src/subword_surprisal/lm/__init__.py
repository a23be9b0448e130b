"""Order-N n-gram language models with modified Kneser-Ney smoothing."""

from .arpa import ArpaFormatError, dumps_arpa, export_arpa, import_arpa, loads_arpa
from .counts import BOS, EOS, UNK, CountTrie, EmptyCountsError, count_ngrams
from .kneser_ney import Discounts, NGramModel, estimate, estimate_discounts, logprob


def train(token_sentences, order: int = 5, fallback: float = 0.75) -> NGramModel:
    return estimate(count_ngrams(token_sentences, order), fallback=fallback)


__all__ = [
    "ArpaFormatError", "BOS", "CountTrie", "Discounts", "EOS", "EmptyCountsError",
    "NGramModel", "UNK", "count_ngrams", "dumps_arpa", "estimate", "estimate_discounts",
    "export_arpa", "import_arpa", "loads_arpa", "logprob", "train",
]
