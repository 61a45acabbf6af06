#!/usr/bin/env python3
"""Wall-clock comparison of the three solver pipelines over a dimension sweep.

Reproduces the benchmark-table experiments: identity-covariance Gaussian
data, kappa = 1e3, mean and median seconds per (algorithm, p).  The
`reference` backend times the hand-written factorization kernels, `lapack`
the library-backed ones.

Example (quick):   python scripts/timing_tables.py --n 100 --p-list 150,250,350 --reps 10
Full-scale run:    python scripts/timing_tables.py --n 500 --p-list 500,1000,2000 \
                       --backend lapack --reps 20 --out results/table_timing.csv
"""

import argparse
import sys

from c3ma.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--p-list", default="150,200,250,300,350")
    parser.add_argument("--reps", type=int, default=20)
    parser.add_argument("--backend", choices=("lapack", "reference"), default="reference")
    parser.add_argument("--algorithms", default="gr-svd,mod-svd")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="results/timing.csv")
    parser.add_argument("--summary-out", default="results/timing_summary.csv")
    args = parser.parse_args()

    import os

    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    return cli_main(
        [
            "bench",
            "--n", str(args.n),
            "--p-list", args.p_list,
            "--reps", str(args.reps),
            "--backend", args.backend,
            "--algorithms", args.algorithms,
            "--seed", str(args.seed),
            "--out", args.out,
            "--summary-out", args.summary_out,
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
