"""Weights of the components of Csp(C3+T3), exactly for small n and by
importance sampling for large n.

The coloured counts of the two components agree, but a generic member of
Csp(C3) has three homomorphisms to C3 while a generic member of Csp(T3) has
one.  Counting uncoloured digraphs therefore gives T3 about three times the
weight of C3.
"""

import argparse
import random
from fractions import Fraction

from homlaws.asymptotics import csp_members, mixture_decomposition
from homlaws.colored import sample_uniform
from homlaws.homomorphism import count_homs, homomorphic
from homlaws.structures import directed_cycle, disjoint_union, transitive_tournament


def exact_rows(max_n):
    t3, c3 = transitive_tournament(3), directed_cycle(3)
    for n in range(1, max_n + 1):
        a, b = len(csp_members(t3, n)), len(csp_members(c3, n))
        yield n, a, b, Fraction(a, a + b)


def estimated_share(n, trials, seed):
    """Share of T3 among the uniform members of Csp(C3+T3) on n vertices.

    Coloured samples are reweighted by 1/#homs, which turns the uniform
    coloured law into the uniform law on digraphs."""
    d = disjoint_union(directed_cycle(3), transitive_tournament(3))
    t3 = transitive_tournament(3)
    rng = random.Random(seed)
    num = den = 0.0
    for _ in range(trials):
        g = sample_uniform(d, n, rng.getrandbits(64)).graph
        w = 1.0 / count_homs(g, d)
        den += w
        if homomorphic(g, t3):
            num += w
    return num / den


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--exact-n", type=int, default=5)
    ap.add_argument("--sizes", default="10,20,40")
    ap.add_argument("--trials", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    d = disjoint_union(directed_cycle(3), transitive_tournament(3))
    for mode in ("csp", "colored"):
        print(mode, "weights:", " ".join(map(str, mixture_decomposition(d, mode=mode).weights())))
    print(" n  |Csp(T3)|  |Csp(C3)|  T3 share")
    for n, a, b, share in exact_rows(args.exact_n):
        print(f"{n:2d}  {a:9d}  {b:9d}  {float(share):.4f}")
    for n in map(int, args.sizes.split(",")):
        print(f"n = {n}: estimated T3 share {estimated_share(n, args.trials, args.seed):.4f}")


if __name__ == "__main__":
    main()
