#!/usr/bin/env python3
"""Print h^i(mD) * d!/m^d next to hhat^i(D) for growing m.

    python3 scripts/convergence_table.py --fixture F1 --class 3E+F --m-max 24
"""

import argparse
import math
from fractions import Fraction

from positivity_lab import fixtures, toric


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--fixture", default="F1", choices=fixtures.FIXTURE_NAMES)
    ap.add_argument("--class", dest="cls", default="3E+F")
    ap.add_argument("--m-max", type=int, default=16)
    args = ap.parse_args()

    fx = fixtures.get(args.fixture)
    D = fx.divisor(fx.parse(args.cls))
    d = fx.dim
    target = toric.hhat_profile(fx.fan, D)
    print("limit  " + "  ".join(f"hhat{i}={v}" for i, v in enumerate(target)))
    print("m    " + "  ".join(f"{'normalized h' + str(i):>16} {'m*|err|':>9}" for i in range(d + 1)))
    for m in range(1, args.m_max + 1):
        dims = toric.cohomology(fx.fan, D * m).dims
        cells = []
        for i, h in enumerate(dims):
            x = Fraction(h * math.factorial(d), m**d)
            cells.append(f"{float(x):16.6f} {float(m * abs(x - target[i])):9.4f}")
        print(f"{m:<4} " + "  ".join(cells))


if __name__ == "__main__":
    main()
