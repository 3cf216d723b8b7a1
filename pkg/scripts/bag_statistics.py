"""Exact probability that a uniform T_l-coloured digraph has a colour class
smaller than n // l."""

import argparse

from homlaws.colored import bag_statistics
from homlaws.structures import transitive_tournament


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ell", type=int, default=2)
    ap.add_argument("--sizes", default="10,11,20,21,30,31,40,41,80")
    args = ap.parse_args()
    t = transitive_tournament(args.ell)
    for n in map(int, args.sizes.split(",")):
        p = bag_statistics(t, n)["p_small_bag"]
        print(f"n = {n:3d}  p_small_bag = {float(p):.6f}")


if __name__ == "__main__":
    main()
