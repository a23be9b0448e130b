from __future__ import annotations

import os

import pytest

from subword_surprisal.config import ALL_SCHEMES, load_config, load_stopwords, parse_config, parse_schemes
from subword_surprisal.tokenization import ConfigurationError, Scheme

from conftest import TOY


def test_toy_config_parses_and_validates():
    cfg = load_config(os.path.join(TOY, "toy.cfg")).validate()
    assert cfg.schemes == ALL_SCHEMES
    assert cfg.spillover == {"eyetracking": 1, "selfpaced": 3}
    assert os.path.isabs(cfg.train_corpus) and os.path.isfile(cfg.merges)


def test_relative_paths_and_defaults(tmp_path):
    cfg = parse_config("train_corpus = a.txt\nrt.x = r.tsv  # trailing comment\n", str(tmp_path))
    assert cfg.train_corpus == str(tmp_path / "a.txt")
    assert cfg.spillover == {"x": 1}
    assert cfg.order == 5 and cfg.seed == 20231206 and cfg.align


@pytest.mark.parametrize("text,msg", [
    ("order = 5\n", "train_corpus is required"),
    ("train_corpus = a\nbogus = 1\n", "unknown config key"),
    ("train_corpus = a\norder = five\n", "bad value"),
    ("train_corpus = a\njust words\n", "key = value"),
    ("train_corpus = a\nschemes = orthographic, sentencepiece\n", "valid schemes"),
])
def test_parse_errors(text, msg):
    with pytest.raises(ConfigurationError, match=msg):
        parse_config(text)


def test_validation_lists_every_problem(tmp_path):
    (tmp_path / "t.txt").write_text("a b\n")
    cfg = parse_config("train_corpus = t.txt\nrt.x = missing.tsv\nspillover.x = 2\norder = 1\n", str(tmp_path))
    with pytest.raises(ConfigurationError) as exc:
        cfg.validate()
    text = str(exc.value)
    for needle in ("merges", "lexicon", "rt.x not found", "spillover.x must be 1 or 3", "order must be >= 2"):
        assert needle in text


def test_bpe_can_train_its_own_merges(tmp_path):
    (tmp_path / "t.txt").write_text("a b\n")
    parse_config("train_corpus = t.txt\nschemes = bpe\nbpe_train_merges = 10\n", str(tmp_path)).validate()


def test_overrides_and_hash():
    cfg = load_config(os.path.join(TOY, "toy.cfg"))
    other = cfg.with_overrides(schemes="bpe,orthographic", seed=3, out_dir="/tmp/x")
    assert other.schemes == (Scheme.ORTHOGRAPHIC, Scheme.BPE)
    assert other.seed == 3 and other.out_dir == "/tmp/x"
    assert other.sha256() != cfg.sha256()
    assert cfg.with_overrides(out_dir="/elsewhere").sha256() == cfg.sha256()


def test_parse_schemes_dedup():
    assert parse_schemes("bpe bpe, morphological") == (Scheme.BPE, Scheme.MORPHOLOGICAL)


def test_bundled_stopwords():
    words = load_stopwords()
    assert "the" in words and "of" in words and len(words) == len(set(words))
