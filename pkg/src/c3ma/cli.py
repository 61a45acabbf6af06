"""Command line interface.

Subcommands
-----------
solve      approximate one covariance from a data matrix or covariance file
bench      wall-clock comparison of the three solver pipelines
trace      kappa sweep of the truncation path on synthetic data
simulate   write a synthetic data matrix to CSV
spectrum   mean sample-covariance eigenvalues over repetitions

Data matrix CSVs are oriented p rows (variables) x n columns (observations).
Exit codes: 0 success, 2 invalid flags or files, 3 infeasible zero matrix.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

import numpy as np

from . import fileio
from .analysis import kappa_mu_maximizer, kappa_nu_maximizer, trace_path
from .datagen import (
    SigmaSpec,
    eigen_dispersion,
    make_sigma,
    rng_for,
    sample_covariance,
    sample_mvn,
)
from .errors import C3MAError, InfeasibleZeroMatrix, InvalidInput, InvalidKappa
from .pipeline import densify, solve_fu_spt, solve_gr_svd, solve_mod_svd, spectrum_of_data

ALGORITHMS = ("fu-spt", "gr-svd", "mod-svd")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="c3ma",
        description=(
            "Nearest covariance approximation under a condition number bound. "
            "Data matrices are CSV with p rows (variables) and n columns "
            "(observations)."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve one approximation problem")
    src = solve.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="data matrix CSV (p x n)")
    src.add_argument("--cov", help="covariance matrix in Matrix Market format")
    solve.add_argument("--kappa", type=float, required=True, help="condition bound >= 1")
    solve.add_argument(
        "--algorithm",
        choices=ALGORITHMS,
        help="pipeline (default: mod-svd for --input, fu-spt for --cov)",
    )
    solve.add_argument("--backend", choices=("lapack", "reference"), default="lapack")
    solve.add_argument("--center", action="store_true", help="subtract row means first")
    solve.add_argument("--dense", metavar="PATH", help="write dense result (.mtx)")
    solve.add_argument("--compact", metavar="PATH", help="write compact result (.json)")
    solve.add_argument("--result", metavar="PATH", help="write result record JSON (default: stdout)")
    solve.set_defaults(func=cmd_solve)

    bench = sub.add_parser("bench", help="time the three pipelines")
    bench.add_argument("--n", type=_positive_int, required=True)
    bench.add_argument("--p-list", required=True, help="comma-separated dimensions")
    bench.add_argument("--reps", type=int, default=10, help="measured repetitions (>= 3)")
    bench.add_argument("--algorithms", default=",".join(ALGORITHMS))
    bench.add_argument("--kappa", type=float, default=1e3)
    bench.add_argument("--backend", choices=("lapack", "reference"), default="lapack")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", metavar="PATH", help="per-repetition CSV (default: stdout)")
    bench.add_argument("--summary-out", metavar="PATH", help="mean/median CSV")
    bench.set_defaults(func=cmd_bench)

    trace = sub.add_parser("trace", help="sweep kappa and record the truncation path")
    trace.add_argument("--p", type=_positive_int, required=True)
    trace.add_argument("--n", type=_positive_int, required=True)
    trace.add_argument("--sigma-cond-exp", type=float, required=True,
                       help="i: population condition number is 10^(2i)")
    trace.add_argument("--spacing", choices=("linear", "log"), default="linear")
    trace.add_argument("--kappa-min", type=float, default=1.0)
    trace.add_argument("--kappa-max", type=float, required=True)
    trace.add_argument("--kappa-step", type=float, required=True)
    trace.add_argument("--seed", type=int, default=0)
    trace.add_argument("--out", metavar="PATH", help="CSV output (default: stdout)")
    trace.set_defaults(func=cmd_trace)

    simulate = sub.add_parser("simulate", help="write a synthetic data matrix")
    simulate.add_argument("--p", type=_positive_int, required=True)
    simulate.add_argument("--n", type=_positive_int, required=True)
    simulate.add_argument("--sigma-cond-exp", type=float,
                          help="draw from a conditioned covariance instead of identity")
    simulate.add_argument("--spacing", choices=("linear", "log"), default="linear")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--out", metavar="PATH", required=True)
    simulate.set_defaults(func=cmd_simulate)

    spectrum = sub.add_parser("spectrum", help="mean sample eigenvalues over repetitions")
    spectrum.add_argument("--p", type=_positive_int, required=True)
    spectrum.add_argument("--n", type=_positive_int, required=True)
    spectrum.add_argument("--reps", type=_positive_int, default=100)
    spectrum.add_argument("--seed", type=int, default=0)
    spectrum.add_argument("--out", metavar="PATH", help="CSV output (default: stdout)")
    spectrum.set_defaults(func=cmd_spectrum)

    return parser


def _write_rows(path: str | None, header: list[str], rows: list[list]) -> None:
    if path is None:
        import csv

        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [fileio.format_float(v) if isinstance(v, float) else str(v) for v in row]
            )
    else:
        fileio.write_table_csv(path, header, rows)


def cmd_solve(args) -> int:
    if args.input is not None:
        algorithm = args.algorithm or "mod-svd"
        x = fileio.read_data_matrix_csv(args.input)
        started = time.perf_counter()
        if algorithm == "fu-spt":
            approx = solve_fu_spt(sample_covariance(x), args.kappa, form="compact")
        elif algorithm == "gr-svd":
            approx = solve_gr_svd(x, args.kappa, form="compact",
                                  backend=args.backend, center=args.center)
        else:
            approx = solve_mod_svd(x, args.kappa, form="compact",
                                   backend=args.backend, center=args.center)
        wall_ms = (time.perf_counter() - started) * 1e3
        n: int | None = x.shape[1]
    else:
        algorithm = args.algorithm or "fu-spt"
        if algorithm != "fu-spt":
            raise InvalidInput(
                "--cov provides no factor structure; the SVD pipelines need --input"
            )
        s = fileio.read_symmetric_matrix_mm(args.cov)
        started = time.perf_counter()
        approx = solve_fu_spt(s, args.kappa, form="compact")
        wall_ms = (time.perf_counter() - started) * 1e3
        n = None

    if args.dense:
        fileio.write_symmetric_matrix_mm(args.dense, densify(approx))
    if args.compact:
        fileio.write_json(args.compact, fileio.compact_payload(approx.compact))
    record = fileio.result_record(
        algorithm=approx.algorithm,
        p=approx.p,
        n=n,
        solution=approx.solution,
        frobenius_error=approx.frobenius_error,
        wall_time_ms=wall_ms,
    )
    text = fileio.write_json(args.result, record)
    if args.result is None:
        print(text)
    return EXIT_OK


def _timed_solve(algorithm: str, x: np.ndarray, kappa: float, backend: str) -> float:
    started = time.perf_counter()
    if algorithm == "fu-spt":
        # Forming the sample covariance is step one of this pipeline.
        solve_fu_spt(sample_covariance(x), kappa, form="dense")
    elif algorithm == "gr-svd":
        solve_gr_svd(x, kappa, form="dense", backend=backend)
    else:
        solve_mod_svd(x, kappa, form="dense", backend=backend)
    return time.perf_counter() - started


def cmd_bench(args) -> int:
    if args.reps < 3:
        raise InvalidInput("bench needs --reps >= 3")
    try:
        p_list = [int(tok) for tok in args.p_list.split(",") if tok.strip()]
    except ValueError as exc:
        raise InvalidInput(f"bad --p-list: {exc}") from exc
    if not p_list or min(p_list) < 1:
        raise InvalidInput("bad --p-list: need positive dimensions")
    algorithms = [tok.strip() for tok in args.algorithms.split(",") if tok.strip()]
    for algorithm in algorithms:
        if algorithm not in ALGORITHMS:
            raise InvalidInput(f"unknown algorithm {algorithm!r}")
    if args.kappa < 1.0:
        raise InvalidKappa("kappa must be >= 1")

    from threadpoolctl import threadpool_limits

    rows: list[list] = []
    summary: list[list] = []
    with threadpool_limits(limits=1):
        for p_index, p in enumerate(p_list):
            # One warm-up draw plus one draw per repetition; every algorithm
            # sees the same data so the comparison is head-to-head.
            draws = [
                rng_for(args.seed, p_index, rep).standard_normal((p, args.n))
                for rep in range(args.reps + 1)
            ]
            for algorithm in algorithms:
                _timed_solve(algorithm, draws[0], args.kappa, args.backend)
                seconds = [
                    _timed_solve(algorithm, draws[rep], args.kappa, args.backend)
                    for rep in range(1, args.reps + 1)
                ]
                rows.extend(
                    [algorithm, p, args.n, rep + 1, float(sec)]
                    for rep, sec in enumerate(seconds)
                )
                summary.append(
                    [
                        algorithm,
                        p,
                        args.n,
                        float(statistics.fmean(seconds)),
                        float(statistics.median(seconds)),
                    ]
                )

    _write_rows(args.out, ["algorithm", "p", "n", "rep", "seconds"], rows)
    if args.summary_out:
        fileio.write_table_csv(
            args.summary_out,
            ["algorithm", "p", "n", "meanSeconds", "medianSeconds"],
            summary,
        )
    if args.out is not None:
        for algorithm, p, n, mean_s, median_s in summary:
            print(f"{algorithm} p={p} n={n} mean={mean_s:.6f}s median={median_s:.6f}s")
    return EXIT_OK


def cmd_trace(args) -> int:
    if args.kappa_min < 1.0 or args.kappa_step <= 0.0 or args.kappa_max < args.kappa_min:
        raise InvalidInput("bad kappa grid: need 1 <= min <= max and step > 0")
    grid = np.arange(args.kappa_min, args.kappa_max + 0.5 * args.kappa_step, args.kappa_step)
    _, sigma_form = make_sigma(
        SigmaSpec(args.p, args.sigma_cond_exp, args.spacing, args.seed)
    )
    x = sample_mvn(sigma_form, args.n, (args.seed, 1))
    spectrum = spectrum_of_data(x)
    path = trace_path(spectrum, grid)

    rows: list[list] = []
    for idx, kappa in enumerate(path.kappa_grid):
        feasible = bool(path.feasible_seq[idx])
        if feasible:
            kappa_mu_txt = kappa_nu_txt = in_txt = ""
        else:
            alpha = int(path.alpha_seq[idx])
            beta = int(path.beta_seq[idx])
            kappa_mu = kappa_mu_maximizer(alpha, beta, spectrum)
            kappa_nu = kappa_nu_maximizer(alpha, beta, spectrum)
            kappa_mu_txt = fileio.format_float(kappa_mu)
            kappa_nu_txt = fileio.format_float(kappa_nu)
            in_txt = str(kappa_mu <= kappa <= kappa_nu).lower()
        last = idx == path.kappa_grid.size - 1
        rows.append(
            [
                float(kappa),
                int(path.alpha_seq[idx]),
                int(path.beta_seq[idx]),
                float(path.mu_seq[idx]),
                float(path.nu_seq[idx]),
                "" if last else int(path.diff_alpha[idx]),
                "" if last else int(path.diff_beta[idx]),
                kappa_mu_txt,
                kappa_nu_txt,
                in_txt,
            ]
        )
    _write_rows(
        args.out,
        ["kappa", "alpha", "beta", "mu", "nu", "diffAlpha", "diffBeta",
         "kappaMu", "kappaNu", "inInterval"],
        rows,
    )
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.sigma_cond_exp is None:
        x = rng_for(args.seed, 1).standard_normal((args.p, args.n))
    else:
        _, sigma_form = make_sigma(
            SigmaSpec(args.p, args.sigma_cond_exp, args.spacing, args.seed)
        )
        x = sample_mvn(sigma_form, args.n, (args.seed, 1))
    fileio.write_data_matrix_csv(args.out, x)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    means = eigen_dispersion(args.p, args.n, args.reps, args.seed)
    rows = [[idx + 1, float(value)] for idx, value in enumerate(means)]
    _write_rows(args.out, ["index", "meanEigenvalue"], rows)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleZeroMatrix as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (C3MAError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
