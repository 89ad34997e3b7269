#!/usr/bin/env python3
"""Count cocompact-core orbit representatives across ranks and thresholds.

The table grows like the number of bounded-jump ascending integer vectors
with windowed sum; useful for sanity-checking the finiteness argument at
desk scale.
"""

import argparse

from latred.covers import core_orbit_reps


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=5)
    ap.add_argument("--max-theta", type=int, default=6)
    args = ap.parse_args()
    header = "n\\theta " + " ".join(f"{t:>7}" for t in range(args.max_theta + 1))
    print(header)
    for n in range(1, args.max_n + 1):
        row = [f"{len(core_orbit_reps(n, t)):>7}" for t in range(args.max_theta + 1)]
        print(f"{n:>7} " + " ".join(row))


if __name__ == "__main__":
    main()
