"""Kraft sums and average code lengths of the support code for a few bases."""

import argparse
from fractions import Fraction
import csv
import sys

from negbeta.measure import support_code
from negbeta.numeration import Base, golden_base


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-len", type=int, default=40)
    args = p.parse_args()
    bases = {
        "-2": Base.integer(-2),
        "-3": Base.integer(-3),
        "-gamma0": golden_base(),
        "ex1": Base.algebraic((1, 2, -2, -1, 2, -1, -1, 0, 0, 0, 0, 2, -1, 0, 3, 1), -3, -2),
        "lv0": Base.algebraic((1, 0, 1, 1), Fraction(-3, 2), Fraction(-7, 5)),
        "lv1": Base.algebraic((1, 0, 1, 0, 0, 1), Fraction(-13, 10), Fraction(-11, 10)),
    }
    w = csv.writer(sys.stdout)
    w.writerow(["base", "code", "truncated", "tail", "ratio", "kraft", "average_length"])
    for name, base in bases.items():
        sc = support_code(base, args.max_len)
        k = sc.stats.kraft
        w.writerow([name, sc.source, f"{float(k.truncated):.12f}", f"{float(k.tail):.3e}",
                    f"{float(k.ratio or 0):.4f}", f"{float(k.truncated + k.tail):.12f}",
                    f"{float(sc.average_length):.10f}"])


if __name__ == "__main__":
    main()
