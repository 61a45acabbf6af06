"""File formats used by the command line tools.

Data matrices and tabular outputs are RFC-4180 CSV with '.' decimals and 17
significant digits; dense symmetric matrices use the Matrix Market array
format; solver results and compact approximations are versioned JSON.
"""

from __future__ import annotations

import csv
import json
from typing import Any

import numpy as np
import scipy.io

from .errors import InvalidInput
from .pipeline import CompactForm

SCHEMA_VERSION = 1
FLOAT_FORMAT = "%.17g"


def format_float(value: float) -> str:
    return FLOAT_FORMAT % value


def write_data_matrix_csv(path: str, matrix: np.ndarray) -> None:
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2:
        raise InvalidInput("data matrix must be 2-d")
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        for row in arr:
            writer.writerow([format_float(v) for v in row])


def read_data_matrix_csv(path: str) -> np.ndarray:
    try:
        arr = np.loadtxt(path, delimiter=",", ndmin=2, dtype=float)
    except ValueError as exc:
        raise InvalidInput(f"could not parse {path} as a CSV matrix: {exc}") from exc
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{path} contains non-finite entries")
    return arr


def write_symmetric_matrix_mm(path: str, matrix: np.ndarray) -> None:
    arr = np.asarray(matrix, dtype=float)
    scipy.io.mmwrite(path, arr, symmetry="symmetric")


def read_symmetric_matrix_mm(path: str) -> np.ndarray:
    try:
        arr = np.asarray(scipy.io.mmread(path), dtype=float)
    except ValueError as exc:
        raise InvalidInput(f"could not parse {path} as Matrix Market: {exc}") from exc
    return arr


def write_table_csv(path: str, header: list[str], rows: list[list[Any]]) -> None:
    """Generic table writer; floats get full precision, other cells str()."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [format_float(v) if isinstance(v, float) else str(v) for v in row]
            )


def result_record(
    algorithm: str,
    p: int,
    n: int | None,
    solution,
    frobenius_error: float,
    wall_time_ms: float,
) -> dict[str, Any]:
    """JSON-ready solver record; alpha/beta are null on the feasible branch."""
    return {
        "schemaVersion": SCHEMA_VERSION,
        "algorithm": algorithm,
        "p": p,
        "n": n,
        "alpha": solution.alpha,
        "beta": solution.beta,
        "mu": solution.mu,
        "nu": solution.nu,
        "kappa": solution.kappa,
        "kappaAchieved": solution.achieved_condition_number,
        "objective": frobenius_error,
        "wallTimeMs": wall_time_ms,
        "feasibleShortCircuit": solution.feasible,
    }


def write_json(path: str | None, payload: dict[str, Any]) -> str:
    text = json.dumps(payload, indent=2)
    if path is not None:
        with open(path, "w") as handle:
            handle.write(text + "\n")
    return text


def compact_payload(compact: CompactForm) -> dict[str, Any]:
    """Compact approximation as JSON: columns stored column-by-column."""
    return {
        "schemaVersion": SCHEMA_VERSION,
        "p": compact.p,
        "muStar": compact.mu_star,
        "deltas": compact.deltas.tolist(),
        "columns": compact.columns.T.tolist(),
    }


def read_compact_json(path: str) -> CompactForm:
    with open(path) as handle:
        payload = json.load(handle)
    try:
        p = int(payload["p"])
        deltas = np.asarray(payload["deltas"], dtype=float)
        raw = payload["columns"]
        columns = (
            np.asarray(raw, dtype=float).reshape(len(raw), p).T
            if raw
            else np.zeros((p, 0))
        )
        mu = float(payload["muStar"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed compact JSON in {path}: {exc}") from exc
    return CompactForm(mu_star=mu, columns=columns, deltas=deltas)
