"""Find where b_n/c_n starts decreasing for a template and how fast it falls.

    python scripts/calibrate_ratio.py --template c3+t3 --max-n 60
"""

import argparse

from homlaws.colored import count_table
from homlaws.logic import named_digraph


def calibrate(d, max_n):
    rows = count_table(d, range(1, max_n + 1)).rows
    ratio = {r.n: r.ratio for r in rows}
    # least N0 from which the ratio decreases strictly up to max_n
    n0 = max_n
    while n0 > 1 and ratio[n0 - 1] > ratio[n0]:
        n0 -= 1
    return n0, ratio


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--template", default="c3+t3")
    ap.add_argument("--max-n", type=int, default=60)
    args = ap.parse_args()
    n0, ratio = calibrate(named_digraph(args.template), args.max_n)
    for n in sorted(ratio):
        print(f"{n:3d}  {float(ratio[n]):.6e}")
    print(f"N0 = {n0}")
    if n0 + 30 in ratio:
        print(f"ratio(N0) / ratio(N0+30) = {float(ratio[n0] / ratio[n0 + 30]):.4g}")


if __name__ == "__main__":
    main()
