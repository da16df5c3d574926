#!/usr/bin/env python3
"""Regenerate data/synthetic_sequences.csv deterministically.

The bundled corpus is a synthetic stand-in for a coding-vs-intergenomic
screen. Class 1 ("coding-like") sequences are drawn from one fixed,
compositionally homogeneous recipe, the way protein-coding regions are
constrained to a narrow base composition. Class 0 ("intergenic-like")
sequences each draw their own GC content from a wide band, mimicking the
compositional heterogeneity of intergenic DNA. Class 1 is also more
abundant (60%), a mild library-prep skew. The two classes overlap heavily
on every k-mer summary, so downstream classifiers sit near chance, which
is the regime the benchmark is designed to probe.

Regenerating with the same seed reproduces the committed file byte for
byte:

    python3 scripts/generate_synthetic.py
"""

import csv
import random
from pathlib import Path

SEED = 20240817
N_CLASS0 = 160  # intergenic-like: heterogeneous composition
N_CLASS1 = 240  # coding-like: homogeneous composition, more abundant
LENGTH = 200
GC_CLASS1 = 0.50
GC_BAND_CLASS0 = (0.44, 0.56)

OUT = Path(__file__).resolve().parent.parent / "data" / "synthetic_sequences.csv"


def weights(gc: float) -> list[float]:
    at = (1.0 - gc) / 2.0
    return [at, gc / 2.0, gc / 2.0, at]  # A, C, G, T


def main() -> None:
    rng = random.Random(SEED)

    def seq(gc: float) -> str:
        return "".join(rng.choices("ACGT", weights=weights(gc), k=LENGTH))

    rows = [(seq(rng.uniform(*GC_BAND_CLASS0)), 0) for _ in range(N_CLASS0)]
    rows += [(seq(GC_CLASS1), 1) for _ in range(N_CLASS1)]
    rng.shuffle(rows)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sequence", "label"])
        writer.writerows(rows)
    print(f"wrote {OUT} ({len(rows)} sequences)")


if __name__ == "__main__":
    main()
