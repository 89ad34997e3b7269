#!/usr/bin/env python3
"""Census of canonical filtrations over a family of diagonal + shear forms.

Sweeps inner products diag(1, a) pulled back along unit shears and prints
the chain ranks with exact instability tags; a quick way to see where the
semistable region ends.
"""

import argparse
from fractions import Fraction

from latred.latz import InnerProduct, canonical_filtration_z


def shear_pullback(s, c):
    # basis change e1 -> e1, e2 -> c*e1 + e2
    return s.pulled_back([[1, 0], [c, 1]])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-a", type=int, default=6)
    ap.add_argument("--max-shear", type=int, default=2)
    args = ap.parse_args()
    for a in range(1, args.max_a + 1):
        for c in range(0, args.max_shear + 1):
            s = shear_pullback(InnerProduct.diagonal([1, Fraction(a)]), c)
            rep = canonical_filtration_z(s)
            ranks = [w.rank for w in rep.chain]
            cs = {w.rank: v.as_log_root() for w, v in rep.c_values.items()}
            tag = "semistable" if len(ranks) == 2 else f"c={cs}"
            print(f"a={a} shear={c}: chain ranks {ranks} ({tag})")


if __name__ == "__main__":
    main()
