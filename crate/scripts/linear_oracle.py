#!/usr/bin/env python3
"""Toy black-box oracle speaking the stdin/stdout prediction protocol.

Reads a feature CSV (header row of feature names, one sample per line) from
stdin, scores each row with a fixed linear function of the features, squashes
the score through a sigmoid, and buckets it uniformly into the class names
given on the command line. Writes one class name per data row to stdout.

Example:
    python3 scripts/linear_oracle.py neg pos < features.csv
"""

import math
import sys


def main() -> int:
    names = sys.argv[1:]
    if not names:
        sys.stderr.write("usage: linear_oracle.py CLASS [CLASS...]\n")
        return 2
    header = sys.stdin.readline()
    if not header.strip():
        return 0
    n_features = len(header.rstrip("\n").split(","))
    weights = [math.sin(j + 1.0) for j in range(n_features)]
    out = []
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        xs = [float(cell) for cell in line.split(",")]
        score = sum(w * x for w, x in zip(weights, xs))
        u = 1.0 / (1.0 + math.exp(-score))
        idx = min(int(u * len(names)), len(names) - 1)
        out.append(names[idx])
    if out:
        sys.stdout.write("\n".join(out) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
