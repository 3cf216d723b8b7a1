"""Fraction of labelled triangle-free graphs that are bipartite, n = 1..7."""

import argparse
from fractions import Fraction

from homlaws.asymptotics import triangle_free_counts


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=7)
    args = ap.parse_args()
    print(" n  triangle-free  bipartite  fraction")
    for n in range(1, args.max_n + 1):
        tf, bip = triangle_free_counts(n)
        f = Fraction(bip, tf)
        print(f"{n:2d}  {tf:13d}  {bip:9d}  {f} ({float(f):.4f})")


if __name__ == "__main__":
    main()
