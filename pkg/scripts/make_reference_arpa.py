"""Build reference ARPA files with KenLM's ``lmplz`` for the oracle test.

Reads the token streams written by ``subword-surprisal train`` and writes
gzipped ARPA files to tests/data/reference/. Needs an lmplz binary (pass
--lmplz or put it on PATH); the outputs are committed so the test suite
does not depend on KenLM.

Usage: python3 scripts/make_reference_arpa.py --streams runs/toy/streams
"""

from __future__ import annotations

import argparse
import gzip
import os
import shutil
import subprocess

HERE = os.path.dirname(os.path.abspath(__file__))


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--streams", default=os.path.join(HERE, "..", "runs", "toy", "streams"))
    ap.add_argument("--out", default=os.path.join(HERE, "..", "tests", "data", "reference"))
    ap.add_argument("--lmplz", default=shutil.which("lmplz") or "lmplz")
    ap.add_argument("--order", type=int, default=5)
    ap.add_argument("--fallback", default="0.75")
    args = ap.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    for name in sorted(os.listdir(args.streams)):
        if not name.endswith(".txt"):
            continue
        with open(os.path.join(args.streams, name), "rb") as fh:
            arpa = subprocess.run(
                [args.lmplz, "-o", str(args.order), "-S", "20%", "-T", "/tmp",
                 "--discount_fallback", args.fallback, args.fallback, args.fallback],
                stdin=fh, capture_output=True, check=True).stdout
        dest = os.path.join(args.out, name[:-4] + ".arpa.gz")
        with gzip.GzipFile(dest, "wb", mtime=0) as gz:
            gz.write(arpa)
        print(f"{dest}: {len(arpa)} bytes")


if __name__ == "__main__":
    main()
