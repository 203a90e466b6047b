#!/usr/bin/env python3
"""Tabulate a, b, c for L = p*(lam E + F) + q*H with A = p*(E + mu F) + q*H on F1 x P1."""

import argparse

from positivity_lab.asymptotic import example_invariants


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max", type=int, default=5, help="lambda and mu range over 2..max")
    ap.add_argument("--direct-toric", action="store_true", help="cross-check against the 3-dimensional fan")
    args = ap.parse_args()

    header = f"{'lambda':>6} {'mu':>4} {'a':>3} {'b':>3} {'c':>3}  {'deg on D':>8}  profile"
    print(header + ("  toric agrees" if args.direct_toric else ""))
    for lam in range(2, args.max + 1):
        for mu in range(2, args.max + 1):
            rep = example_invariants(lam, mu, direct_toric=args.direct_toric)
            v = rep.values
            row = f"{lam:>6} {mu:>4} {rep.a:>3} {rep.b:>3} {rep.c:>3}  {v['degreeOnD']:>8}  ({', '.join(v['kunnethProfile'])})"
            if args.direct_toric:
                row += f"  {v['kunnethMatchesToric']}"
            print(row)


if __name__ == "__main__":
    main()
