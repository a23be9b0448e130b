from __future__ import annotations

import os

import pytest

from subword_surprisal import lm
from subword_surprisal.corpus_io import build_frequency_table, load_rt_corpus, load_training_corpus
from subword_surprisal.tokenization import Scheme, Tokenizer, load_lexicon, load_merges

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
TOY = os.path.join(ROOT, "data", "toy")
MERGES = os.path.join(ROOT, "data", "gpt2", "merges.txt")
REFERENCE = os.path.join(ROOT, "tests", "data", "reference")

REFERENCE_SENTENCE = ("the sporadic nature of press coverage of the court often relegates its reporters "
                     "to the fringes of the journalistic community")


@pytest.fixture(scope="session")
def gpt2_merges():
    return load_merges(MERGES)


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(os.path.join(TOY, "lexicon.tsv"))


@pytest.fixture(scope="session")
def tokenizers(gpt2_merges, lexicon):
    return {
        Scheme.ORTHOGRAPHIC: Tokenizer(Scheme.ORTHOGRAPHIC),
        Scheme.BPE: Tokenizer(Scheme.BPE, merges=gpt2_merges),
        Scheme.MORPHOLOGICAL: Tokenizer(Scheme.MORPHOLOGICAL, lexicon=lexicon),
    }


@pytest.fixture(scope="session")
def toy_corpus():
    return load_training_corpus(os.path.join(TOY, "train.txt"))


@pytest.fixture(scope="session")
def toy_freq(toy_corpus):
    return build_frequency_table(toy_corpus)


@pytest.fixture(scope="session")
def toy_streams(toy_corpus, tokenizers):
    return {s: [t.tokenize_sentence(sent.words) for sent in toy_corpus] for s, t in tokenizers.items()}


@pytest.fixture(scope="session")
def toy_models(toy_streams):
    return {s: lm.train(streams, 5) for s, streams in toy_streams.items()}


@pytest.fixture(scope="session")
def toy_rt():
    return load_rt_corpus(os.path.join(TOY, "rt_eyetracking.tsv"))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
