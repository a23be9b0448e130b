"""Generate the bundled toy fixtures under data/toy/.

A small morpheme-based grammar produces a 1,000-sentence training corpus,
a segmentation lexicon covering every multimorphemic word it can emit, and
two reading-time corpora (one-word and three-word spillover designs) with
punctuation, capitalization, numbers and a few unseen words.

Usage: python3 scripts/make_toy_data.py [--out data/toy] [--seed 7]
"""

from __future__ import annotations

import argparse
import math
import os
import random
from collections import Counter

from subword_surprisal.corpus_io import RTRecord, Sentence, write_rt_corpus, write_training_corpus

REFERENCE_SENTENCE = ("the sporadic nature of press coverage of the court often relegates its reporters "
                     "to the fringes of the journalistic community")

# surface -> morphs; fixed entries first, the grammar adds regular forms
FIXED = {
    "relegates": "relegate s", "its": "it s", "reporters": "re port er s", "fringes": "fringe s",
    "journalistic": "journal istic", "community": "commune ity", "coverage": "cover age",
    "reporter": "re port er", "carefully": "care ful ly", "careful": "care ful",
    "bulbs": "bulb s", "tulips": "tulip s", "gardeners": "garden er s", "gardener": "garden er",
    "teachers": "teach er s", "teacher": "teach er", "farmers": "farm er s", "farmer": "farm er",
    "painters": "paint er s", "painter": "paint er", "readers": "read er s", "reader": "read er",
    "quickly": "quick ly", "slowly": "slow ly", "kindness": "kind ness", "unkind": "un kind",
    "darkness": "dark ness", "rebuilt": "re built", "decomposition": "de compose ition",
    "communities": "commune ity s", "journals": "journal s", "courts": "court s",
    "happily": "happy ly", "unhappy": "un happy", "quietly": "quiet ly",
}

NOUNS = ["court", "press", "journal", "garden", "tulip", "bulb", "river", "market", "village", "window",
         "table", "letter", "friend", "house", "road", "field", "story", "report", "paper", "school",
         "fringe", "community", "teacher", "farmer", "painter", "reader", "gardener", "reporter",
         "nature", "coverage", "kindness", "darkness", "flower", "bridge", "harbor", "tower"]
IRREGULAR_PLURAL = {"story": "stories", "community": "communities", "press": "presses"}
MASS = {"nature", "coverage", "kindness", "darkness"}
VERBS = ["relegate", "cover", "paint", "plant", "visit", "watch", "open", "follow", "help", "call",
         "clean", "print", "report", "need", "water", "move", "praise", "ignore", "describe", "reach"]
ADJS = ["sporadic", "journalistic", "careful", "quick", "slow", "kind", "unkind", "dark", "old",
        "small", "green", "quiet", "happy", "unhappy", "bright", "local"]
ADVS = ["often", "never", "always", "carefully", "quickly", "slowly", "quietly", "happily", "rarely"]
PREPS = ["of", "to", "in", "near", "with", "behind", "from"]
DETS_SG = ["the", "a", "every", "its", "their", "this"]
DETS_PL = ["the", "its", "their", "these", "many", "some"]
UNSEEN = ["zorblat", "quintessa", "flumber", "drovix"]


def plural(noun: str) -> str:
    if noun in IRREGULAR_PLURAL:
        return IRREGULAR_PLURAL[noun]
    return noun + ("es" if noun.endswith(("s", "sh", "ch")) else "s")


def verb_form(verb: str, form: str) -> str:
    if form == "s":
        return verb + ("es" if verb.endswith(("s", "sh", "ch")) else "s")
    if form == "ed":
        return verb + ("d" if verb.endswith("e") else "ed")
    return (verb[:-1] if verb.endswith("e") else verb) + "ing"


def build_lexicon() -> dict[str, str]:
    lex = dict(FIXED)
    for n in NOUNS:
        base = lex.get(n, n)
        if n in MASS:
            continue
        p = plural(n)
        lex.setdefault(p, f"{base} s")
    for v in VERBS:
        for form in ("s", "ed", "ing"):
            w = verb_form(v, form)
            lex.setdefault(w, f"{v} {form}")
    return lex


class Grammar:
    def __init__(self, rng: random.Random):
        self.rng = rng

    def noun_phrase(self) -> tuple[list[str], bool]:
        r = self.rng
        noun = r.choice(NOUNS)
        pl = noun not in MASS and r.random() < 0.4
        words = [r.choice(DETS_PL if pl else DETS_SG)]
        if r.random() < 0.45:
            words.append(r.choice(ADJS))
        words.append(plural(noun) if pl else noun)
        if r.random() < 0.25:
            words += ["of", "the", r.choice(NOUNS)]
        return words, pl

    def sentence(self) -> list[str]:
        r = self.rng
        subj, pl = self.noun_phrase()
        words = list(subj)
        if r.random() < 0.4:
            words.append(r.choice(ADVS))
        verb = r.choice(VERBS)
        form = r.choice(["ed", "ed", "s"])
        if form == "s" and pl:
            words.append(verb)
        else:
            words.append(verb_form(verb, form))
        obj, _ = self.noun_phrase()
        words += obj
        if r.random() < 0.5:
            words.append(r.choice(PREPS))
            words += self.noun_phrase()[0]
        return words


def sentence_case(words: list[str]) -> list[str]:
    return [words[0].capitalize(), *words[1:]]


def training_corpus(rng: random.Random, n: int) -> list[Sentence]:
    g = Grammar(rng)
    out = [Sentence("s0", tuple(sentence_case(REFERENCE_SENTENCE.split())))]
    while len(out) < n:
        out.append(Sentence(f"s{len(out)}", tuple(sentence_case(g.sentence()))))
    return out


def decorate(words: list[str], rng: random.Random) -> list[str]:
    """Add RT-corpus surface noise: capitals, commas, quotes, numbers."""
    words = sentence_case(words)
    if rng.random() < 0.15:
        words.insert(rng.randrange(1, len(words)), rng.choice(UNSEEN))
    if rng.random() < 0.1:
        words.insert(rng.randrange(1, len(words)), str(rng.randrange(1900, 2024)))
    if rng.random() < 0.3 and len(words) > 4:
        i = rng.randrange(2, len(words) - 1)
        words[i] += ","
    if rng.random() < 0.1:
        words[0] = '"' + words[0]
        words[-1] += '."'
    else:
        words[-1] += rng.choice([".", ".", ".", "!", "?"])
    return words


def rt_corpus(rng: random.Random, n_texts: int, sentences_per_text: int, freq: Counter,
              base: float, prefix: str) -> list[RTRecord]:
    g = Grammar(rng)
    total = sum(freq.values())
    records = []
    for t in range(n_texts):
        words = []
        for _ in range(sentences_per_text):
            words += decorate(g.sentence(), rng)
        for i, w in enumerate(words):
            bare = w.strip('.,!?"').lower()
            logf = math.log((freq.get(bare, 0) + 1) / total)
            rt = base + 9.0 * len(bare) - 6.0 * logf + rng.gauss(0.0, 25.0)
            records.append(RTRecord(f"{prefix}{t:02d}", i, w, round(max(rt, 60.0), 1)))
    return records


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "toy"))
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--sentences", type=int, default=1000)
    args = ap.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    rng = random.Random(args.seed)

    corpus = training_corpus(rng, args.sentences)
    write_training_corpus(corpus, os.path.join(args.out, "train.txt"))
    freq = Counter(w.lower() for s in corpus for w in s.words)

    with open(os.path.join(args.out, "lexicon.tsv"), "w", encoding="utf-8") as fh:
        fh.write("# word\tmorphs (space separated)\n")
        for word, morphs in sorted(build_lexicon().items()):
            fh.write(f"{word}\t{morphs}\n")

    write_rt_corpus(rt_corpus(rng, 20, 10, freq, 210.0, "et"), os.path.join(args.out, "rt_eyetracking.tsv"))
    write_rt_corpus(rt_corpus(rng, 12, 10, freq, 300.0, "spr"), os.path.join(args.out, "rt_selfpaced.tsv"))
    print(f"wrote toy fixtures to {os.path.normpath(args.out)}")


if __name__ == "__main__":
    main()
