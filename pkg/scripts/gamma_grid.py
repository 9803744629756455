"""Sweep the set-size base constant over a (p, m, k) grid.

Writes one CSV row per grid point with the optimized constant, the
minimizer, and the boundary flag.  The strict ceiling (constant < p
away from the boundary) is rechecked on every row.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

from fpsystems import gamma


@dataclass(frozen=True)
class GridConfig:
    primes: tuple[int, ...] = (2, 3, 5, 7)
    ms: tuple[int, ...] = (1, 2)
    k_offsets: tuple[int, ...] = (0, 1, 2, 3, 4)
    tol: float = 1e-12
    n: int | None = None


def run(config: GridConfig, out) -> int:
    writer = csv.writer(out, lineterminator="\n")
    header = ["p", "m", "k", "gamma", "z_star", "at_boundary", "below_p"]
    if config.n is not None:
        header += ["n", "set_size_bound"]
    writer.writerow(header)
    rows = 0
    for p in config.primes:
        for m in config.ms:
            for off in config.k_offsets:
                k = 2 * m + off
                res = gamma(p, m, k, tol=config.tol)
                below = res.gamma < p if not res.at_boundary else res.gamma == p
                row = [p, m, k, f"{res.gamma:.12f}", f"{res.z_star:.12f}",
                       res.at_boundary, below]
                if config.n is not None:
                    row += [config.n, f"{k * res.gamma ** config.n:.6f}"]
                writer.writerow(row)
                rows += 1
                if not below:
                    print(f"ceiling violated at p={p} m={m} k={k}",
                          file=sys.stderr)
                    return 1
    print(f"{rows} grid points, ceiling holds on all", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5, 7])
    parser.add_argument("--ms", type=int, nargs="+", default=[1, 2])
    parser.add_argument("--k-offsets", type=int, nargs="+",
                        default=[0, 1, 2, 3, 4],
                        help="k values as 2m + offset")
    parser.add_argument("--tol", type=float, default=1e-12)
    parser.add_argument("--n", type=int,
                        help="also tabulate the set-size bound k * gamma^n")
    parser.add_argument("--out", help="CSV destination (default stdout)")
    args = parser.parse_args(argv)
    config = GridConfig(tuple(args.primes), tuple(args.ms),
                        tuple(args.k_offsets), args.tol, args.n)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            return run(config, fh)
    return run(config, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
