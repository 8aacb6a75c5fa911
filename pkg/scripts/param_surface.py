#!/usr/bin/env python3
"""Accuracy/runtime surface over (number of subsets, sampling rate).

Thin wrapper over the sweep subcommand with the grid the sensitivity
analysis uses.

Example:
    python scripts/param_surface.py --points-per-subspace 200 --trials 5 \
        --output results/surface.csv
"""

import argparse
import sys

from pmssc.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points-per-subspace", type=int, default=200)
    parser.add_argument("--trials", type=int, default=5)
    parser.add_argument("--delta-grid", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    parser.add_argument("--t-grid", default="2,6,10,14,18,22,26,30")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=0)
    parser.add_argument("--output", required=True)
    args = parser.parse_args()

    return cli_main([
        "sweep",
        "--points-per-subspace", str(args.points_per_subspace),
        "--trials", str(args.trials),
        "--delta-grid", args.delta_grid,
        "--t-grid", args.t_grid,
        "--seed", str(args.seed),
        "--threads", str(args.threads),
        "--output", args.output,
    ])


if __name__ == "__main__":
    sys.exit(main())
