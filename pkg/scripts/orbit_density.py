"""Covering radius of the circle orbit {k r pi} as the number of points grows.

    python3 scripts/orbit_density.py [--nmax 100000]

For irrational r the radius decays roughly like 1/n (more erratically when r
has large continued-fraction terms, e.g. 1/pi); for rational r it stalls at a
positive value, e.g. 2 pi / 3 for r = 2/3.
"""

import argparse
import math

import numpy as np

from projcong.sphere import orbit_covering_radius

FRACTIONS = {
    "1/2": 0.5,
    "2/3": 2 / 3,
    "sqrt2-1": math.sqrt(2) - 1,
    "golden-1": (math.sqrt(5) - 1) / 2,
    "1/pi": 1 / math.pi,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=100_000)
    args = ap.parse_args()
    ns = np.unique(np.logspace(1, math.log10(args.nmax), 9).astype(int))
    print("n".rjust(8) + "".join(name.rjust(14) for name in FRACTIONS))
    for n in ns:
        row = [orbit_covering_radius(r, int(n)).covering_radius for r in FRACTIONS.values()]
        print(f"{n:8d}" + "".join(f"{c:14.6g}" for c in row))


if __name__ == "__main__":
    main()
