"""Fraction of members of Csp(T_2) with exactly one homomorphism to T_2."""

import argparse

from homlaws.asymptotics import unique_hom_fraction
from homlaws.structures import transitive_tournament


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()
    t2 = transitive_tournament(2)
    print(" n  members  one hom  fraction")
    for n in range(1, args.max_n + 1):
        members, one, frac = unique_hom_fraction(t2, n)
        print(f"{n:2d}  {members:7d}  {one:7d}  {frac} ({float(frac):.4f})")


if __name__ == "__main__":
    main()
