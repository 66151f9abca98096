#!/usr/bin/env python3
"""Warm vs cold start comparison on the bundled MPC plants.

Runs the closed loop once per mode and reports iteration and wall-time
statistics, optionally dumping the per-QP records to CSV.
"""

import argparse

from fbrs.mpc import BUNDLED_EXAMPLES, run_sequence
from fbrs.newton import SolverConfig


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--example", choices=sorted(BUNDLED_EXAMPLES), default="double-integrator")
    parser.add_argument("--horizon", type=int, default=8)
    parser.add_argument("--steps", type=int, default=50)
    parser.add_argument("--tol", type=float, default=1e-6)
    parser.add_argument("--shift", action="store_true", help="shift the warmstart by one stage")
    parser.add_argument("--stats-prefix", help="write <prefix>_{warm,cold}.csv")
    args = parser.parse_args()

    spec = BUNDLED_EXAMPLES[args.example](horizon=args.horizon)
    cfg = SolverConfig(tol=args.tol)
    print(f"{args.example}: horizon {args.horizon}, {args.steps} steps, tol {args.tol:g}")
    results = {}
    for mode in ("cold", "warm"):
        trajectory, stats = run_sequence(
            spec, args.steps, mode, cfg, shift_warmstart=args.shift and mode == "warm"
        )
        results[mode] = stats
        final = float((trajectory.states[-1] ** 2).sum() ** 0.5)
        print(
            f"  {mode:4s}: iterations mean {stats.mean_iterations:6.2f} max {stats.max_iterations:3d}"
            f" | time mean {1e3 * stats.mean_time:7.3f} ms max {1e3 * stats.max_time:7.3f} ms"
            f" | final |x| {final:.2e}"
        )
        if args.stats_prefix:
            stats.write_csv(f"{args.stats_prefix}_{mode}.csv")
    ratio = results["warm"].mean_iterations / results["cold"].mean_iterations
    print(f"  warm/cold mean-iteration ratio: {ratio:.3f}")


if __name__ == "__main__":
    main()
