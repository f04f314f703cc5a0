"""Print the characteristic sequences and code families of the two worked examples."""

import argparse

from negbeta.codes import enumerate_family
from negbeta.numeration import Base, characteristic_sequence
from negbeta.sequences import format_word

EX1 = (1, 2, -2, -1, 2, -1, -1, 0, 0, 0, 0, 2, -1, 0, 3, 1)
EX2 = tuple(reversed((1, 2, -2, 1, 1, -1, 1, -1, 1, -2, 1, 1, -2, 0, 1)))


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-len", type=int, default=15)
    args = p.parse_args()
    for name, poly, families in [("ex1", EX1, [("Gamma0", None), ("Delta_i", 0), ("Delta_i", 1), ("Delta_i", 2)]),
                                 ("ex2", EX2, [("Delta00", None)])]:
        base = Base.algebraic(poly, -3, -2)
        print(f"{name}: d = {characteristic_sequence(base)}")
        for fam, idx in families:
            f = enumerate_family(base, fam, args.max_len, index=idx)
            label = fam if idx is None else f"{fam}[{idx}]"
            print(f"  {label:<10} {' '.join(format_word(w) for w in f.words)}")


if __name__ == "__main__":
    main()
