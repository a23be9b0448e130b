"""ARPA text serialization (log10 probabilities and backoffs)."""

from __future__ import annotations

import gzip
import io
import math
import os
import re
from typing import TextIO

from .counts import BOS
from .kneser_ney import NGramModel

LN10 = math.log(10.0)
NEG_INF_LOG10 = -99.0

_COUNT_RE = re.compile(r"^ngram (\d+)=(\d+)$")
_SECTION_RE = re.compile(r"^\\(\d+)-grams:$")


class ArpaFormatError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _fmt(x: float) -> str:
    v = x / LN10 if math.isfinite(x) else NEG_INF_LOG10
    s = f"{v:.7f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _open_text(path, mode):
    if str(path).endswith(".gz"):
        return gzip.open(path, mode + "t", encoding="utf-8", newline="\n")
    return open(path, mode, encoding="utf-8", newline="\n")


def write_arpa(model: NGramModel, fh: TextIO) -> None:
    by_order: list[list[tuple[str, ...]]] = [[] for _ in range(model.order)]
    for g in model.prob:
        by_order[len(g) - 1].append(g)
    if not by_order[0]:
        raise ValueError("ARPA needs at least one unigram")
    # drop trailing empty orders so the header stays consistent
    while not by_order[-1]:
        by_order.pop()
    fh.write("\n\\data\\\n")
    for n, grams in enumerate(by_order, start=1):
        fh.write(f"ngram {n}={len(grams)}\n")
    for n, grams in enumerate(by_order, start=1):
        fh.write(f"\n\\{n}-grams:\n")
        for g in sorted(grams):
            lp = model.prob[g]
            if g == (BOS,):
                lp = float("-inf")
            line = f"{_fmt(lp)}\t{' '.join(g)}"
            if g in model.backoff:
                line += f"\t{_fmt(model.backoff[g])}"
            fh.write(line + "\n")
    fh.write("\n\\end\\\n")


def export_arpa(model: NGramModel, path: str | os.PathLike) -> None:
    with _open_text(path, "w") as fh:
        write_arpa(model, fh)


def dumps_arpa(model: NGramModel) -> str:
    buf = io.StringIO()
    write_arpa(model, buf)
    return buf.getvalue()


def read_arpa(fh: TextIO) -> NGramModel:
    expected: dict[int, int] = {}
    prob: dict[tuple[str, ...], float] = {}
    backoff: dict[tuple[str, ...], float] = {}
    state = "preamble"
    order = 0
    seen_in_section = 0
    line_no = 0

    def close_section():
        if order and seen_in_section != expected.get(order, -1):
            raise ArpaFormatError(line_no, f"{order}-gram section has {seen_in_section} entries, "
                                           f"header says {expected.get(order)}")

    for line_no, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line:
            continue
        if state == "preamble":
            if line == "\\data\\":
                state = "header"
            continue
        if state == "header":
            m = _COUNT_RE.match(line)
            if m:
                expected[int(m.group(1))] = int(m.group(2))
                continue
            state = "body"
        if line.startswith("\\"):
            if state == "end":
                raise ArpaFormatError(line_no, "content after \\end\\")
            close_section()
            if line == "\\end\\":
                state = "end"
                continue
            m = _SECTION_RE.match(line)
            if not m:
                raise ArpaFormatError(line_no, f"malformed section header {line!r}")
            order = int(m.group(1))
            if order not in expected:
                raise ArpaFormatError(line_no, f"section for order {order} not declared in \\data\\")
            seen_in_section = 0
            continue
        if state != "body" or not order:
            raise ArpaFormatError(line_no, "n-gram entry outside a section")
        parts = line.split()
        if len(parts) not in (order + 1, order + 2):
            raise ArpaFormatError(line_no, f"expected {order}-gram entry, got {line!r}")
        try:
            lp = float(parts[0])
            bo = float(parts[order + 1]) if len(parts) == order + 2 else None
        except ValueError:
            raise ArpaFormatError(line_no, f"bad number in {line!r}") from None
        g = tuple(parts[1:order + 1])
        prob[g] = lp * LN10 if lp > NEG_INF_LOG10 else float("-inf")
        if bo is not None:
            backoff[g] = bo * LN10 if bo > NEG_INF_LOG10 else float("-inf")
        seen_in_section += 1

    if state != "end":
        raise ArpaFormatError(line_no, "missing \\end\\ marker" if state == "body" else "missing \\data\\ header")
    if not expected.get(1):
        raise ArpaFormatError(line_no, "ARPA file has no unigrams")
    return NGramModel(max(expected), prob, backoff)


def import_arpa(path: str | os.PathLike) -> NGramModel:
    with _open_text(path, "r") as fh:
        return read_arpa(fh)


def loads_arpa(text: str) -> NGramModel:
    return read_arpa(io.StringIO(text))
