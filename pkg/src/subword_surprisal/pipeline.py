"""End-to-end stages: train one LM per scheme, then score reading-time
corpora and run the evaluation. Every stage writes its intermediate
artifacts under the run's output directory."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import asdict, replace
from typing import Iterable

from . import __version__, lm
from .config import RunConfig, load_stopwords
from .corpus_io import build_frequency_table, load_rt_corpus, load_training_corpus, write_frequency_table
from .evaluation import (assign_folds, cross_validate, item_diff_report, segmentation_stats,
                         surprisal_by_token_count, whole_vs_split_analysis, wilcoxon_rank_sum)
from .evaluation.report import CorpusResult, EvaluationReport, SchemeResult, write_csvs, write_json
from .regression import cohens_f2, coefficient_tests, delta_loglik, fit_ols
from .surprisal import (align_schemes, baseline_and_full, build_feature_rows, compute_surprisals,
                        write_feature_rows)
from .tokenization import (ConfigurationError, Scheme, Tokenizer, load_lexicon, load_merges,
                           train_bpe, write_merges, write_token_stream)

log = logging.getLogger(__name__)


class ManifestError(RuntimeError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage: str, exc: BaseException):
        super().__init__(f"[{stage}] {exc}")
        self.stage = stage


def sha256_file(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _input_hashes(config: RunConfig) -> dict[str, str]:
    paths = {"train_corpus": config.train_corpus, "merges": config.merges,
             "lexicon": config.lexicon, "stopwords": config.stopwords}
    paths.update({f"rt.{k}": v for k, v in config.rt_corpora.items()})
    return {k: sha256_file(v) for k, v in sorted(paths.items()) if v and os.path.isfile(v)}


def model_dir(config: RunConfig) -> str:
    return os.path.join(config.out_dir, "models")


def build_tokenizers(config: RunConfig, corpus=None) -> dict[Scheme, Tokenizer]:
    toks = {}
    for scheme in config.schemes:
        if scheme is Scheme.ORTHOGRAPHIC:
            toks[scheme] = Tokenizer(scheme)
        elif scheme is Scheme.BPE:
            if config.merges and os.path.isfile(config.merges):
                merges = load_merges(config.merges)
            elif config.bpe_train_merges > 0:
                if corpus is None:
                    corpus = load_training_corpus(config.train_corpus)
                merges = train_bpe(corpus, config.bpe_train_merges)
            else:
                raise ConfigurationError("bpe scheme needs a merge file or bpe_train_merges")
            toks[scheme] = Tokenizer(scheme, merges=merges)
        else:
            toks[scheme] = Tokenizer(scheme, lexicon=load_lexicon(config.lexicon))
    return toks


def _stage(name):
    def wrap(fn):
        def inner(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except (StageError, ConfigurationError, ManifestError):
                raise
            except (OSError, ValueError, KeyError) as exc:
                raise StageError(name, exc) from exc
        inner.__name__ = fn.__name__
        inner.__doc__ = fn.__doc__
        return inner
    return wrap


def train_models(config: RunConfig) -> dict:
    """Train and persist one ARPA model per scheme plus a manifest."""
    config.validate()
    mdir = model_dir(config)
    os.makedirs(os.path.join(config.out_dir, "streams"), exist_ok=True)
    os.makedirs(mdir, exist_ok=True)

    corpus = _stage("load")(load_training_corpus)(config.train_corpus)
    write_frequency_table(build_frequency_table(corpus), os.path.join(config.out_dir, "frequencies.tsv"))
    tokenizers = _stage("tokenize")(build_tokenizers)(config, corpus)

    models = {}
    for scheme, tok in tokenizers.items():
        if scheme is Scheme.BPE and tok.merges is not None and not (config.merges and os.path.isfile(config.merges)):
            write_merges(tok.merges, os.path.join(mdir, "bpe_merges.txt"))
        streams = [tok.tokenize_sentence(s.words) for s in corpus]
        write_token_stream(streams, os.path.join(config.out_dir, "streams", f"{scheme.value}.txt"))
        model = _stage(f"train:{scheme.value}")(lm.train)(streams, config.order, config.discount_fallback)
        path = os.path.join(mdir, f"{scheme.value}.arpa")
        lm.export_arpa(model, path)
        models[scheme.value] = {"path": os.path.basename(path), "sha256": sha256_file(path),
                                "ngrams": model.counts_per_order()}
        log.info("trained %s model: %s n-grams", scheme.value, model.counts_per_order())

    manifest = {
        "stage": "train",
        "version": __version__,
        "config_sha256": config.sha256(),
        "config": config.canonical(),
        "inputs": _input_hashes(config),
        "order": config.order,
        "seed": config.seed,
        "schemes": [s.value for s in config.schemes],
        "models": models,
    }
    with open(os.path.join(mdir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def load_models(config: RunConfig, directory: str | None = None) -> dict[Scheme, lm.NGramModel]:
    directory = directory or model_dir(config)
    mpath = os.path.join(directory, "manifest.json")
    if not os.path.isfile(mpath):
        raise ManifestError(f"no model manifest at {mpath}; run 'train' first")
    with open(mpath, encoding="utf-8") as fh:
        manifest = json.load(fh)
    missing = [s.value for s in config.schemes if s.value not in manifest["schemes"]]
    if missing:
        raise ManifestError(f"models for scheme(s) {', '.join(missing)} not in manifest "
                            f"(has {', '.join(manifest['schemes'])})")
    if manifest["order"] != config.order:
        raise ManifestError(f"manifest order {manifest['order']} != config order {config.order}")
    models = {}
    for s in config.schemes:
        entry = manifest["models"][s.value]
        path = os.path.join(directory, entry["path"])
        if sha256_file(path) != entry["sha256"]:
            raise ManifestError(f"{path} does not match its manifest hash")
        models[s] = lm.import_arpa(path)
    return models


def _summaries(items) -> list[dict]:
    return [asdict(x) for x in items]


def evaluate_corpus(name: str, records, spillover: int, models, tokenizers, freq_table,
                    config: RunConfig, stopwords: Iterable[str]) -> tuple[CorpusResult, dict]:
    schemes = list(models)
    per_scheme = {s: compute_surprisals(models[s], tokenizers[s], records, freq_table) for s in schemes}
    if config.align:
        per_scheme = align_schemes(per_scheme)
    rows = {s: build_feature_rows(records, per_scheme[s], freq_table, spillover) for s in schemes}
    all_keys = set().union(*({r.key for r in rs} for rs in rows.values()))
    folds = assign_folds(all_keys, config.seed, config.n_folds)
    rows = {s: [_with_fold(r, folds[r.key]) for r in rs] for s, rs in rows.items()}

    baseline, full = baseline_and_full(spillover)
    cv = cross_validate(rows, folds, baseline, full, require_shared_rows=config.align)
    wvs = whole_vs_split_analysis(rows, folds, baseline, full)
    results = {}
    for s in schemes:
        fb, ff = fit_ols(rows[s], baseline), fit_ols(rows[s], full)
        try:
            f2 = cohens_f2(fb, ff)
        except ValueError:
            f2 = None
        rs = None
        if s is not Scheme.ORTHOGRAPHIC and Scheme.ORTHOGRAPHIC in cv:
            t = wilcoxon_rank_sum(cv[s], cv[Scheme.ORTHOGRAPHIC])
            rs = {"W": t.W, "U": t.U, "p": t.p, "method": t.method}
        results[s.value] = SchemeResult(
            n_rows=len(rows[s]),
            delta_loglik=delta_loglik(rows[s], baseline, full),
            cohens_f2=f2,
            fold_delta_loglik=cv[s],
            coefficients=coefficient_tests(ff).as_dict(),
            r2_baseline=fb.r2,
            r2_full=ff.r2,
            rank_sum_vs_orthographic=rs,
            segmentation=_summaries(segmentation_stats(records, tokenizers[s], stopwords)),
            surprisal_by_k=_summaries(surprisal_by_token_count(per_scheme[s].values())),
            whole_vs_split={k: asdict(v) for k, v in wvs[s].items()},
        )
    corpus = CorpusResult(spillover, len(records), config.n_folds, results)
    if Scheme.MORPHOLOGICAL in per_scheme and Scheme.BPE in per_scheme:
        diffs = item_diff_report(per_scheme[Scheme.MORPHOLOGICAL], per_scheme[Scheme.BPE], records)
        corpus.item_diff = _summaries(diffs)
        corpus.item_diff_schemes = (Scheme.MORPHOLOGICAL.value, Scheme.BPE.value)
    return corpus, rows


def _with_fold(row, fold):
    return replace(row, fold_id=fold)


def evaluate_run(config: RunConfig, models_directory: str | None = None) -> EvaluationReport:
    config.validate()
    if not config.rt_corpora:
        raise ConfigurationError("no reading-time corpora configured (rt.<name> = path)")
    models = _stage("load-models")(load_models)(config, models_directory)
    corpus = _stage("load")(load_training_corpus)(config.train_corpus)
    freq_table = build_frequency_table(corpus)
    tokenizers = _stage("tokenize")(build_tokenizers)(config, corpus)
    stopwords = load_stopwords(config.stopwords)

    feat_dir = os.path.join(config.out_dir, "features")
    os.makedirs(feat_dir, exist_ok=True)
    corpora = {}
    for name, path in sorted(config.rt_corpora.items()):
        records = _stage(f"load:{name}")(load_rt_corpus)(path)
        result, rows = _stage(f"evaluate:{name}")(evaluate_corpus)(
            name, records, config.spillover[name], models, tokenizers, freq_table, config, stopwords)
        for s, rs in rows.items():
            write_feature_rows(rs, os.path.join(feat_dir, f"{name}.{s.value}.tsv"))
        corpora[name] = result

    manifest = {
        "stage": "evaluate",
        "version": __version__,
        "config_sha256": config.sha256(),
        "inputs": _input_hashes(config),
        "seed": config.seed,
    }
    report = EvaluationReport(config.seed, config.order, config.align,
                              [s.value for s in config.schemes], corpora, manifest)
    problems = report.check_invariants()
    if problems:
        raise StageError("validate", ValueError("; ".join(problems)))
    os.makedirs(config.out_dir, exist_ok=True)
    write_json(report, os.path.join(config.out_dir, "report.json"))
    write_csvs(report, config.out_dir)
    return report


def tokenize_lines(lines: Iterable[str], tokenizers: dict[Scheme, Tokenizer]) -> list[str]:
    """Side-by-side tokenization, one row per scheme, blank line between
    sentences. Boundary markers are not shown."""
    out = []
    for line in lines:
        words = line.split()
        if not words:
            continue
        if out:
            out.append("")
        for scheme, tok in tokenizers.items():
            tokens = [t for w in words for t in tok.tokenize(w).tokens]
            out.append(f"{scheme.value}\t{' '.join(tokens)}")
    return out
