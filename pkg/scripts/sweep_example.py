#!/usr/bin/env python3
"""Quick interactive driver: steady-state squeezing versus reservoir strength.

Prints a small table and the squeezing window for one N; useful for exploring
parameter choices before committing to a full config run.

Usage: python3 scripts/sweep_example.py [--N 10] [--r-max 2.0] [--step 0.1]
"""

import argparse

import numpy as np

from wgss.experiments import optimize_r, sweep_r


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=10)
    ap.add_argument("--r-max", type=float, default=2.0)
    ap.add_argument("--step", type=float, default=0.1)
    args = ap.parse_args()

    grid = np.round(np.arange(0.0, args.r_max + 1e-9, args.step), 10)
    pts, window = sweep_r(args.N, r_grid=grid)
    print(f"# N = {args.N}")
    print("r        1/xi^2")
    for r, inv in pts:
        marker = "  <- squeezed" if inv > 1 else ""
        print(f"{r:6.3f}  {inv:8.5f}{marker}")
    if window:
        print(f"squeezing window: r in [{window[0]:.3f}, {window[1]:.3f}]")
        r_opt, inv_max = optimize_r(args.N, r_grid=grid)
        print(f"optimum: r = {r_opt:.5f}, 1/xi^2 = {inv_max:.6f}")
    else:
        print("no squeezing on this grid")


if __name__ == "__main__":
    main()
