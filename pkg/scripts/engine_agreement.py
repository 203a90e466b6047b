#!/usr/bin/env python3
"""Compare the toric and closed-form surface engines on a grid, as CSV.

One row per class; ``agree`` is 1 when the two profiles are identical.
"""

import argparse
import csv
import itertools
import sys
from fractions import Fraction

from positivity_lab.asymptotic import backend_for
from positivity_lab.linalg import format_rational


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixtures", nargs="+", default=["P2", "P1xP1", "F1", "F2", "F3"])
    ap.add_argument("--bound", type=int, default=3, help="coordinates range over [-bound, bound]")
    ap.add_argument("--denominator", type=int, default=2)
    args = ap.parse_args()

    q = args.denominator
    axis = [Fraction(k, q) for k in range(-args.bound * q, args.bound * q + 1)]
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["fixture", "class", "toric", "surface", "ample", "agree"])
    disagreements = 0
    for name in args.fixtures:
        t, s = backend_for(name, "toric"), backend_for(name, "surface")
        for cls in itertools.product(axis, repeat=t.rank):
            pt, ps = t.profile(cls), s.profile(cls)
            same = pt == ps
            disagreements += not same
            out.writerow([name, " ".join(map(format_rational, cls)), " ".join(pt.to_json()),
                          " ".join(ps.to_json()), int(t.is_ample(cls)), int(same)])
    print(f"# disagreements: {disagreements}", file=sys.stderr)
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
