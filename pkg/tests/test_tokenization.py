from __future__ import annotations

import hashlib
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from subword_surprisal.corpus_io import Sentence
from subword_surprisal.tokenization import (GPT2_MARKER, ConfigurationError, MergeTable, Scheme,
                                            SegmentationLexicon, Tokenizer, apply_bpe, bpe_symbols,
                                            load_merges, read_token_stream, segment_morph, tokenize_corpus,
                                            train_bpe, write_merges, write_token_stream)

from conftest import REFERENCE_SENTENCE, MERGES

BPE_ROW = ("the sporadic nature of press coverage of the court often releg ates its reporters to the "
           "fr inges of the journalistic community")
MORPH_ROW = ("the sporadic nature of press cover age of the court often relegate s it s re port er s to "
             "the fringe s of the journal istic commune ity")


def test_merge_file_is_the_public_gpt2_table():
    with open(MERGES, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    assert digest == "fe36cab26d4f4421ed725e10a2e9ddb7f799449c603a96e7f29b5a3c82a95862"
    assert len(load_merges(MERGES)) == 50000


@pytest.mark.parametrize("word,tokens", [
    ("relegates", ("releg", "ates")),
    ("fringes", ("fr", "inges")),
    ("reporters", ("reporters",)),
    ("coverage", ("coverage",)),
    ("tulips", ("tul", "ips")),
    ("bulbs", ("bulbs",)),
    ("carefully", ("carefully",)),
])
def test_gpt2_words(gpt2_merges, word, tokens):
    assert apply_bpe(word, gpt2_merges).tokens == tokens


def test_bpe_keeps_marker_on_first_symbol(gpt2_merges):
    assert bpe_symbols("relegates", gpt2_merges) == [GPT2_MARKER + "releg", "ates"]


def test_bpe_is_case_sensitive(gpt2_merges):
    assert apply_bpe("The", gpt2_merges).tokens == ("The",)
    assert apply_bpe("the", gpt2_merges).tokens == ("the",)


@given(st.characters(blacklist_categories=("Zs", "Cc", "Zl", "Zp", "Cs")))
def test_single_char_empty_table(ch):
    if ch.isspace():
        return
    assert apply_bpe(ch, MergeTable(())).tokens == (ch,)


@given(st.text(alphabet="abcdefgh", min_size=1, max_size=12))
def test_bpe_detokenizes(word):
    table = MergeTable((("a", "b"), ("c", "d"), ("ab", "cd"), (GPT2_MARKER, "a")))
    tw = apply_bpe(word, table)
    assert tw.detokenize() == word
    assert tw.initial_flags[0] and not any(tw.initial_flags[1:])


def test_train_bpe_first_merge():
    corpus = [Sentence(f"s{i}", ("aaab",)) for i in range(5)]
    table = train_bpe(corpus, 1, word_initial_marker=None)
    assert table.merges == (("a", "a"),)


def test_train_bpe_zero_merges():
    table = train_bpe([Sentence("s", ("abc",))], 0)
    assert len(table) == 0
    assert apply_bpe("abc", table).tokens == ("a", "b", "c")


def test_train_bpe_frequency_audit(toy_corpus):
    table = train_bpe(toy_corpus, 50)
    assert len(table) == 50
    words = Counter(w for s in toy_corpus for w in s.words)

    def pair_counts(merges):
        counts: Counter = Counter()
        for w, c in words.items():
            syms = bpe_symbols(w, merges)
            for pair in zip(syms, syms[1:]):
                counts[pair] += c
        return counts

    last = table.merges[-1]
    last_freq = pair_counts(MergeTable(table.merges[:-1]))[last]
    after = pair_counts(table)
    assert last_freq > 0
    assert max(after.values()) <= last_freq


def test_merges_roundtrip(tmp_path, toy_corpus):
    table = train_bpe(toy_corpus, 30)
    write_merges(table, tmp_path / "m.txt")
    assert load_merges(tmp_path / "m.txt") == table


def test_duplicate_merge_rejected():
    with pytest.raises(ValueError):
        MergeTable((("a", "b"), ("a", "b")))


def test_morph_lexicon_entries(lexicon):
    assert segment_morph("coverage", lexicon).tokens == ("cover", "age")
    assert segment_morph("journalistic", lexicon).tokens == ("journal", "istic")
    assert segment_morph("Coverage", lexicon).tokens == ("cover", "age")
    assert segment_morph("zorblat", lexicon).tokens == ("zorblat",)
    assert not lexicon.is_concatenative("community")
    assert lexicon.is_concatenative("coverage")


def test_orthographic_identity(toy_corpus):
    streams = tokenize_corpus(toy_corpus[:20], Scheme.ORTHOGRAPHIC)
    assert streams == [[w.lower() for w in s.words] for s in toy_corpus[:20]]


def _row(tok, sentence):
    return " ".join(t for w in sentence.split() for t in tok.tokenize(w).tokens)


def test_reference_sentence_rows(tokenizers):
    assert _row(tokenizers[Scheme.BPE], REFERENCE_SENTENCE) == BPE_ROW
    assert _row(tokenizers[Scheme.MORPHOLOGICAL], REFERENCE_SENTENCE) == MORPH_ROW
    assert _row(tokenizers[Scheme.ORTHOGRAPHIC], REFERENCE_SENTENCE) == REFERENCE_SENTENCE


def test_reference_sentence_bpe_splits_exactly_two_words(tokenizers):
    split = [w for w in REFERENCE_SENTENCE.split() if len(tokenizers[Scheme.BPE].tokenize(w)) > 1]
    assert split == ["relegates", "fringes"]


def test_decomposition_bpe(gpt2_merges):
    # With the word-initial marker the public table yields two pieces.
    assert apply_bpe("decomposition", gpt2_merges).tokens == ("decom", "position")


def test_stream_tokens_marker(tokenizers):
    bpe = tokenizers[Scheme.BPE]
    assert bpe.tokenize_sentence(["relegates", "its"]) == [GPT2_MARKER + "releg", "ates", GPT2_MARKER + "its"]
    morph = tokenizers[Scheme.MORPHOLOGICAL]
    assert morph.tokenize_sentence(["its"]) == [GPT2_MARKER + "it", "s"]
    assert tokenizers[Scheme.ORTHOGRAPHIC].tokenize_sentence(["The", "Cat"]) == ["the", "cat"]


def test_scheme_parse():
    assert Scheme.parse(" BPE ") is Scheme.BPE
    with pytest.raises(ConfigurationError, match="orthographic, bpe, morphological"):
        Scheme.parse("wordpiece")


def test_tokenizer_needs_resources():
    with pytest.raises(ConfigurationError):
        Tokenizer(Scheme.BPE)
    with pytest.raises(ConfigurationError):
        Tokenizer(Scheme.MORPHOLOGICAL)


def test_token_stream_roundtrip(tmp_path, toy_streams):
    streams = toy_streams[Scheme.BPE][:50]
    write_token_stream(streams, tmp_path / "s.txt")
    assert read_token_stream(tmp_path / "s.txt") == streams


def test_empty_morph_entry_rejected():
    with pytest.raises(ValueError):
        SegmentationLexicon({"x": ()})
