"""Spot-check a generated zero table against mpmath.zetazero at random indices."""
import gzip
import sys

import mpmath as mp
import numpy as np


def main(path, n_checks=40, seed=1):
    with gzip.open(path, "rt") as fh:
        g = np.array([float(x) for x in fh if not x.startswith("#")])
    rng = np.random.default_rng(seed)
    idx = np.unique(np.concatenate([[1, 2, 3, 1000, len(g)], rng.integers(1, len(g) + 1, n_checks)]))
    worst = 0.0
    for n in idx:
        ref = float(mp.zetazero(int(n)).imag)
        worst = max(worst, abs(g[n - 1] - ref))
    print(f"{len(g)} ordinates, {idx.size} checked, max |error| = {worst:.2e}")


if __name__ == "__main__":
    main(sys.argv[1])
