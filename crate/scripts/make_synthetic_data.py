#!/usr/bin/env python3
"""Regenerates the bundled datasets under data/.

Fixed seeds keep the files byte-stable; rerun only when the generation recipe
changes.
"""

import csv
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")


def write(name, header, rows):
    os.makedirs(DATA, exist_ok=True)
    path = os.path.join(DATA, name)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def blob(rng, center, spread, count):
    return [[rng.gauss(c, spread) for c in center] for _ in range(count)]


def synth_imbalanced_a():
    rng = random.Random(101)
    rows = []
    for x in blob(rng, (0.0, 0.0), 1.0, 270):
        rows.append([round(x[0], 4), round(x[1], 4), "maj"])
    for x in blob(rng, (3.5, 3.5), 0.6, 30):
        rows.append([round(x[0], 4), round(x[1], 4), "min"])
    rng.shuffle(rows)
    write("synth_imbalanced_a.csv", ["x0", "x1", "cls"], rows)


def synth_imbalanced_b():
    rng = random.Random(202)
    rows = []
    for x in blob(rng, (0.0, 0.0, 0.0), 1.2, 380):
        rows.append([round(v, 4) for v in x] + ["common"])
    for x in blob(rng, (4.0, 4.0, 0.0), 0.7, 20):
        rows.append([round(v, 4) for v in x] + ["rare"])
    rng.shuffle(rows)
    write("synth_imbalanced_b.csv", ["f0", "f1", "f2", "cls"], rows)


def synth_three_class():
    rng = random.Random(303)
    rows = []
    for x in blob(rng, (0.0, 0.0), 0.9, 210):
        rows.append([round(x[0], 4), round(x[1], 4), "alpha"])
    for x in blob(rng, (3.0, 0.0), 0.8, 60):
        rows.append([round(x[0], 4), round(x[1], 4), "beta"])
    for x in blob(rng, (0.0, 3.0), 0.7, 30):
        rows.append([round(x[0], 4), round(x[1], 4), "gamma"])
    rng.shuffle(rows)
    write("synth_three_class.csv", ["x0", "x1", "cls"], rows)


def credit_toy():
    rng = random.Random(404)
    purposes = ["car", "furniture", "radio_tv"]
    housings = ["own", "rent"]
    rows = []
    for _ in range(120):
        duration = rng.randrange(6, 60, 3)
        amount = round(rng.uniform(300, 12000), 2)
        purpose = rng.choice(purposes)
        housing = rng.choice(housings)
        risky = duration > 33 or (amount > 8000 and housing == "rent")
        # A little label noise keeps the problem non-trivial.
        if rng.random() < 0.08:
            risky = not risky
        rows.append([duration, amount, purpose, housing, "bad" if risky else "good"])
    write(
        "credit_toy.csv",
        ["duration", "credit_amount", "purpose", "housing", "cls"],
        rows,
    )


if __name__ == "__main__":
    synth_imbalanced_a()
    synth_imbalanced_b()
    synth_three_class()
    credit_toy()
