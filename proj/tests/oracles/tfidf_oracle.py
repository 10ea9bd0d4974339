"""Brute-force tf-idf / median-threshold oracle for the ten-subject fixture.

Independent of the C++ code path: tokenization is re-derived with a regex,
every score is recomputed from raw counts per cell, and the median is taken
with statistics.median. Prints one `row term` line per set cell, followed by
the per-row medians, for freezing into tests.
"""
import math
import re
import statistics
import sys


def terms(label):
    out = []
    for word in label.split():
        parts = [p.lower() for p in re.split(r"[\\/]", word) if p]
        out.extend(parts if parts else [word.lower()])
    return out


def main(path):
    docs = [terms(l) for l in open(path, encoding="utf-8").read().splitlines() if l.strip()]
    vocab = sorted({t for d in docs for t in d})
    n = len(docs)
    for r, d in enumerate(docs):
        scores = {}
        for t in set(d):
            tf = d.count(t) / len(d)
            df = sum(1 for other in docs if t in other)
            scores[t] = tf * math.log(n / df)
        med = statistics.median(scores.values())
        if med > 0:
            keep = [t for t in scores if scores[t] >= med]
        else:
            keep = [t for t in scores if scores[t] > 0] or list(scores)
        for t in sorted(keep, key=vocab.index):
            print(f"CELL {r} {t}")
        print(f"MEDIAN {r} {med!r}")
    print(f"VOCAB {len(vocab)}")


if __name__ == "__main__":
    main(sys.argv[1])
