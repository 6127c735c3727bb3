#!/usr/bin/env python3
"""Axis-threshold black-box oracle speaking the stdin/stdout protocol.

Labels each row with a fixed nested-threshold rule on the first two feature
columns. With two class names the rule is a union of half-planes
(x0 > 2 or x1 > 1); with three or more it is a decision list over the same
thresholds. Useful as a black box whose decision surface a tree can
replicate exactly.
"""

import sys


def main() -> int:
    names = sys.argv[1:]
    if not names:
        sys.stderr.write("usage: axis_oracle.py CLASS [CLASS...]\n")
        return 2
    header = sys.stdin.readline()
    if not header.strip():
        return 0
    out = []
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        xs = [float(cell) for cell in line.split(",")]
        x0 = xs[0]
        x1 = xs[1] if len(xs) > 1 else 0.0
        if len(names) == 2:
            idx = 1 if (x0 > 2.0 or x1 > 1.0) else 0
        else:
            if x0 > 2.0:
                idx = 1
            elif x1 > 1.0:
                idx = 2
            else:
                idx = 0
        out.append(names[idx])
    if out:
        sys.stdout.write("\n".join(out) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
