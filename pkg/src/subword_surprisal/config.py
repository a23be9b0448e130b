"""Run configuration: a flat ``key = value`` file with ``#`` comments.

Recognised keys::

    train_corpus      training text, one sentence per line (required)
    merges            BPE merge file (required when bpe is a scheme,
                      unless bpe_train_merges > 0)
    bpe_train_merges  learn this many merges from the training corpus instead
    lexicon           segmentation lexicon TSV (required for morphological)
    stopwords         one word per line (default: bundled English list)
    order             n-gram order, >= 2 (default 5)
    seed              fold-assignment seed
    n_folds           cross-validation folds (default 10)
    schemes           comma-separated subset of orthographic, bpe, morphological
    align             true/false, keep only words kept by every scheme
    discount_fallback fixed discount for degenerate count-of-counts
    out_dir           output directory
    rt.<name>         reading-time corpus TSV
    spillover.<name>  lagged words for that corpus, 1 or 3

Relative paths are resolved against the config file's directory.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field, replace
from importlib import resources

from .tokenization import ConfigurationError, Scheme

STOPWORDS_SHA256 = "6d8e6b98440939e713e85dc329b607645db097aa07f2cb57244e4f87c67009b3"
ALL_SCHEMES = (Scheme.ORTHOGRAPHIC, Scheme.BPE, Scheme.MORPHOLOGICAL)
_BOOL = {"true": True, "yes": True, "on": True, "1": True,
         "false": False, "no": False, "off": False, "0": False}


@dataclass(frozen=True)
class RunConfig:
    train_corpus: str
    rt_corpora: dict[str, str] = field(default_factory=dict)
    spillover: dict[str, int] = field(default_factory=dict)
    merges: str | None = None
    bpe_train_merges: int = 0
    lexicon: str | None = None
    stopwords: str | None = None
    order: int = 5
    seed: int = 20231206
    n_folds: int = 10
    schemes: tuple[Scheme, ...] = ALL_SCHEMES
    align: bool = True
    discount_fallback: float = 0.75
    out_dir: str = "runs/default"
    source: str | None = None

    def validate(self) -> "RunConfig":
        problems = []

        def need(path, what):
            if path is None:
                problems.append(f"{what} is not set")
            elif not os.path.isfile(path):
                problems.append(f"{what} not found: {path}")

        need(self.train_corpus, "train_corpus")
        if Scheme.BPE in self.schemes and self.bpe_train_merges <= 0:
            need(self.merges, "merges (required for the bpe scheme)")
        if Scheme.MORPHOLOGICAL in self.schemes:
            need(self.lexicon, "lexicon (required for the morphological scheme)")
        if self.stopwords is not None:
            need(self.stopwords, "stopwords")
        for name, path in self.rt_corpora.items():
            need(path, f"rt.{name}")
            k = self.spillover.get(name)
            if k not in (1, 3):
                problems.append(f"spillover.{name} must be 1 or 3, got {k}")
        if self.order < 2:
            problems.append(f"order must be >= 2, got {self.order}")
        if self.n_folds < 2:
            problems.append(f"n_folds must be >= 2, got {self.n_folds}")
        if not self.schemes:
            problems.append("no schemes selected")
        if problems:
            raise ConfigurationError("invalid configuration:\n  " + "\n  ".join(problems))
        return self

    def with_overrides(self, schemes=None, seed=None, out_dir=None) -> "RunConfig":
        changes = {}
        if schemes is not None:
            changes["schemes"] = parse_schemes(schemes)
        if seed is not None:
            changes["seed"] = int(seed)
        if out_dir is not None:
            changes["out_dir"] = out_dir
        return replace(self, **changes)

    def canonical(self) -> str:
        """Stable text form used for hashing."""
        items = [
            ("train_corpus", self.train_corpus), ("merges", self.merges),
            ("bpe_train_merges", self.bpe_train_merges), ("lexicon", self.lexicon),
            ("stopwords", self.stopwords), ("order", self.order), ("seed", self.seed),
            ("n_folds", self.n_folds), ("schemes", ",".join(s.value for s in self.schemes)),
            ("align", self.align), ("discount_fallback", self.discount_fallback),
        ]
        items += [(f"rt.{k}", v) for k, v in sorted(self.rt_corpora.items())]
        items += [(f"spillover.{k}", v) for k, v in sorted(self.spillover.items())]
        return "\n".join(f"{k} = {v}" for k, v in items)

    def sha256(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


def parse_schemes(value) -> tuple[Scheme, ...]:
    if isinstance(value, str):
        value = [v for v in value.replace(",", " ").split() if v]
    schemes = []
    for v in value:
        s = v if isinstance(v, Scheme) else Scheme.parse(v)
        if s not in schemes:
            schemes.append(s)
    # fixed presentation order
    return tuple(s for s in ALL_SCHEMES if s in schemes)


def parse_config(text: str, base_dir: str = ".", source: str | None = None) -> RunConfig:
    raw: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source or 'config'}:{line_no}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        raw[key] = value

    def path(v):
        return v if os.path.isabs(v) else os.path.normpath(os.path.join(base_dir, v))

    kwargs: dict = {"rt_corpora": {}, "spillover": {}, "source": source}
    try:
        for key, value in raw.items():
            if key.startswith("rt."):
                kwargs["rt_corpora"][key[3:]] = path(value)
            elif key.startswith("spillover."):
                kwargs["spillover"][key[10:]] = int(value)
            elif key in ("train_corpus", "merges", "lexicon", "stopwords", "out_dir"):
                kwargs[key] = path(value)
            elif key in ("order", "seed", "n_folds", "bpe_train_merges"):
                kwargs[key] = int(value)
            elif key == "discount_fallback":
                kwargs[key] = float(value)
            elif key == "align":
                kwargs[key] = _BOOL[value.lower()]
            elif key == "schemes":
                kwargs[key] = parse_schemes(value)
            else:
                raise ConfigurationError(f"unknown config key {key!r}")
    except (ValueError, KeyError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"bad value in config: {exc}") from None
    if "train_corpus" not in kwargs:
        raise ConfigurationError("train_corpus is required")
    for name in kwargs["rt_corpora"]:
        kwargs["spillover"].setdefault(name, 1)
    return RunConfig(**kwargs)


def load_config(path: str | os.PathLike) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_config(text, os.path.dirname(os.path.abspath(path)), str(path))


def load_stopwords(path: str | os.PathLike | None = None) -> list[str]:
    """Stopword list; the bundled default is checked against its pinned hash."""
    if path is None:
        data = resources.files("subword_surprisal").joinpath("data/stopwords_en.txt").read_bytes()
        digest = hashlib.sha256(data).hexdigest()
        if digest != STOPWORDS_SHA256:
            raise RuntimeError(f"bundled stopword list hash mismatch: {digest}")
    else:
        with open(path, "rb") as fh:
            data = fh.read()
    return [w.strip() for w in data.decode("utf-8").splitlines() if w.strip()]
