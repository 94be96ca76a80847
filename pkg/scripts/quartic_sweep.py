"""Count solutions of x + y = a, x^-2 + y^-2 = b over a grid of (a, b).

    python3 scripts/quartic_sweep.py

A pair exists iff b >= 8 / a^2 (equality: the double root x = y = a/2).
"""

import numpy as np

from projcong.quartic import solve_width_tau_system


def main():
    a_values = [0.5, 1.0, 2.0, 4.0]
    b_scale = [0.5, 0.99, 1.0, 1.01, 2.0, 10.0]
    print("   a  " + "".join(f"{f'b*{s}':>10s}" for s in b_scale))
    for a in a_values:
        counts = [len(solve_width_tau_system(a, s * 8.0 / a**2).pairs) for s in b_scale]
        print(f"{a:5.2f} " + "".join(f"{c:10d}" for c in counts))
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(2000):
        x, y = rng.uniform(0.05, 10.0, size=2)
        sol = solve_width_tau_system(x + y, x**-2 + y**-2)
        worst = max(worst, min(abs(px - x) + abs(py - y) for px, py in sol.pairs))
    print(f"planted-pair recovery, 2000 draws: worst error {worst:.2e}")


if __name__ == "__main__":
    main()
