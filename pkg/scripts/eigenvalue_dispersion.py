#!/usr/bin/env python3
"""Mean sorted sample eigenvalues under an identity population covariance.

Shows the dispersion of sample eigenvalues as p approaches and passes n:
with n = 100 the spectrum spreads from all-ones (p << n) toward the
Marchenko-Pastur support edges, and for p > n a zero block appears.  One CSV
column per p value.

Example: python scripts/eigenvalue_dispersion.py --n 100 --p-list 5,20,50,100,200 \
             --reps 100 --out results/dispersion.csv
"""

import argparse
import os
import sys

from c3ma.datagen import eigen_dispersion
from c3ma.fileio import write_table_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--p-list", default="5,20,50,100,200")
    parser.add_argument("--reps", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="results/dispersion.csv")
    args = parser.parse_args()

    p_values = [int(tok) for tok in args.p_list.split(",") if tok.strip()]
    means = {p: eigen_dispersion(p, args.n, args.reps, (args.seed, p)) for p in p_values}
    depth = max(p_values)
    rows = []
    for idx in range(depth):
        rows.append(
            [idx + 1] + [float(means[p][idx]) if idx < p else "" for p in p_values]
        )
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    write_table_csv(args.out, ["index"] + [f"p={p}" for p in p_values], rows)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
