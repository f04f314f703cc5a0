"""Compare Monte Carlo cylinder frequencies with the Parry measure of the support."""

import argparse
from fractions import Fraction

from negbeta.automaton import build_support_automaton
from negbeta.measure import orbit_simulate, parry_measure
from negbeta.numeration import Base, golden_base
from negbeta.sequences import format_word


def battery(A, size):
    out = []
    for n in range(1, 6):
        for w in A.words(n):
            if len(out) < size:
                out.append(w)
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--steps", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=20240601)
    p.add_argument("--words", type=int, default=8)
    args = p.parse_args()
    bases = {
        "-2": Base.integer(-2),
        "-gamma0": golden_base(),
        "ex1": Base.algebraic((1, 2, -2, -1, 2, -1, -1, 0, 0, 0, 0, 2, -1, 0, 3, 1), -3, -2),
        "lv0": Base.algebraic((1, 0, 1, 1), Fraction(-3, 2), Fraction(-7, 5)),
        "lv1": Base.algebraic((1, 0, 1, 0, 0, 1), Fraction(-13, 10), Fraction(-11, 10)),
    }
    print("base,word,analytic,empirical,stderr,z")
    for name, base in bases.items():
        A = build_support_automaton(base)
        pm = parry_measure(A)
        ws = battery(A, args.words)
        rep = orbit_simulate(base, args.steps, args.seed, ws)
        for i, w in enumerate(ws):
            z = (rep.frequency[i] - pm(w)) / rep.stderr[i] if rep.stderr[i] else 0.0
            print(f"{name},{format_word(w)},{pm(w):.8f},{rep.frequency[i]:.8f},{rep.stderr[i]:.2e},{z:+.2f}")


if __name__ == "__main__":
    main()
