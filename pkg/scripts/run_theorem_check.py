"""Run the whole-sphere projection-congruence check on the standard fixture pairs.

    python3 scripts/run_theorem_check.py [--grid 812] [--seed 7] [--workers 1]

Prints one line per pair: verdict, tag histogram, coverage flags and wall time.
"""

import argparse
import collections
import time

import numpy as np

from projcong.bodies import SupportSeries, constant_width_harmonic, random_polytope, reflect, rotated
from projcong.congruence import ClassifyParams
from projcong.geometry import AxisRotation, fibonacci_grid
from projcong.sphere import decompose_sphere


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=812, help="number of grid directions (even)")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--vertices", type=int, default=30)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    K = random_polytope(args.vertices, np.random.Generator(np.random.PCG64(args.seed)))
    cw = constant_width_harmonic(0.05)
    ball = SupportSeries.ball(1.0)
    pairs = {
        "K vs K": (K, K),
        "K vs -K": (K, reflect(K)),
        "K vs rot_z(0.37)": (K, rotated(K, AxisRotation(np.array([0.0, 0.0, 1.0]), 0.37))),
        "ball vs ball": (ball, ball),
        "cw vs cw": (cw, cw),
        "cw vs -cw": (cw, reflect(cw)),
    }
    grid = fibonacci_grid(args.grid // 2, antipodal=True)
    params = ClassifyParams(workers=args.workers)
    print(f"grid={len(grid)} circle_samples={params.circle_samples} match_tol={params.match_tol:g}")
    for name, (A, B) in pairs.items():
        t0 = time.perf_counter()
        rep = decompose_sphere(A, B, grid, params)
        dt = time.perf_counter() - t0
        tags = collections.Counter(r.tag for r in rep.records)
        hist = " ".join(f"{k}={v}" for k, v in sorted(tags.items()))
        print(
            f"{name:18s} {rep.verdict.kind:15s} [{hist}] "
            f"gol={rep.coverage_gol} mod_gol={rep.coverage_mod_gol} {dt:.2f}s"
        )


if __name__ == "__main__":
    main()
