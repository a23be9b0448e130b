"""Command-line driver: ``train``, ``evaluate``, ``tokenize`` and ``report``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .config import RunConfig, load_config, parse_schemes
from .evaluation.report import read_json, render_text
from .pipeline import ManifestError, StageError, build_tokenizers, evaluate_run, tokenize_lines, train_models
from .tokenization import ConfigurationError, Scheme

log = logging.getLogger("subword_surprisal")


def _scheme_list(value: str):
    try:
        return parse_schemes(value)
    except ConfigurationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subword-surprisal",
                                description="Compare word segmentation schemes by surprisal fit to reading times.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        sp.add_argument("--config", required=config_required, help="run config file (key = value)")
        sp.add_argument("--schemes", type=_scheme_list,
                        help="comma-separated: " + ", ".join(s.value for s in Scheme))
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out", help="output directory (overrides out_dir)")

    common(sub.add_parser("train", help="train one n-gram model per scheme"))
    ev = sub.add_parser("evaluate", help="score RT corpora and write the report")
    common(ev)
    ev.add_argument("--models", help="model directory (default: <out>/models)")
    tk = sub.add_parser("tokenize", help="side-by-side tokenization of input sentences")
    common(tk)
    tk.add_argument("--input", default="-", help="text file, one sentence per line (default stdin)")
    rp = sub.add_parser("report", help="print summary tables from a finished run")
    common(rp, config_required=False)
    return p


def _config(args) -> RunConfig:
    cfg = load_config(args.config)
    return cfg.with_overrides(schemes=args.schemes, seed=args.seed, out_dir=args.out)


def _cmd_train(args) -> int:
    cfg = _config(args)
    manifest = train_models(cfg)
    for s, entry in manifest["models"].items():
        print(f"{s}\t{os.path.join(cfg.out_dir, 'models', entry['path'])}")
    return 0


def _cmd_evaluate(args) -> int:
    cfg = _config(args)
    report = evaluate_run(cfg, args.models)
    sys.stdout.write(render_text(report))
    return 0


def _cmd_tokenize(args) -> int:
    cfg = _config(args)
    tokenizers = build_tokenizers(cfg)
    if args.input == "-":
        lines = sys.stdin.read().splitlines()
    else:
        with open(args.input, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    for line in tokenize_lines(lines, tokenizers):
        print(line)
    return 0


def _cmd_report(args) -> int:
    if args.out:
        out = args.out
    elif args.config:
        out = load_config(args.config).out_dir
    else:
        raise ConfigurationError("report needs --out or --config")
    sys.stdout.write(render_text(read_json(os.path.join(out, "report.json"))))
    return 0


COMMANDS = {"train": _cmd_train, "evaluate": _cmd_evaluate, "tokenize": _cmd_tokenize, "report": _cmd_report}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ManifestError as exc:
        print(f"manifest error: {exc}", file=sys.stderr)
        return 3
    except StageError as exc:
        print(f"stage error {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
