"""End-to-end solvers for the constrained covariance approximation.

Three pipelines share the truncation core and differ only in how they obtain
the spectrum and eigenbasis of the sample covariance S = X X^T / n:

* ``solve_fu_spt``   full eigendecomposition of the p x p matrix itself,
* ``solve_gr_svd``   thin SVD of X / sqrt(n) (squared singular values),
* ``solve_mod_svd``  QR of X / sqrt(n), then an SVD of the triangular factor.

Every result carries a compact representation mu* I + C diag(deltas) C^T
(rank beta* - 1); the dense matrix is materialized on request or when the
chosen form asks for it.  The problem is strictly convex, so all pipelines
agree on the result up to floating-point error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, ShapeError
from .linalg import (
    SpectralForm,
    SymmetricMatrix,
    _as_data_matrix,
    _as_symmetric,
    mod_svd,
    symmetric_eigendecomposition,
    thin_svd,
)
from .truncation import (
    EigenSpectrum,
    TruncationSolution,
    search_optimal,
    spectrum_from_eigenvalues,
)

FORMS = ("auto", "dense", "compact")

# "auto" keeps the O(p^2) dense matrix only for moderate dimensions.
AUTO_DENSE_MAX_DIM = 1000


@dataclass(frozen=True)
class CompactForm:
    """mu_star * I_p plus a rank-k orthonormal correction."""

    mu_star: float
    columns: np.ndarray  # p x k, orthonormal
    deltas: np.ndarray  # length k, descending, >= 0

    @property
    def p(self) -> int:
        return self.columns.shape[0]

    @property
    def rank(self) -> int:
        return self.columns.shape[1]


@dataclass(frozen=True)
class CovarianceApproximation:
    """Solver output: truncation data plus compact and optional dense forms."""

    solution: TruncationSolution
    algorithm: str  # "fu-spt" | "gr-svd" | "mod-svd"
    compact: CompactForm
    dense: np.ndarray | None
    frobenius_error: float

    @property
    def p(self) -> int:
        return self.compact.p

    @property
    def kappa_achieved(self) -> float:
        return self.solution.achieved_condition_number


def densify(approx: CovarianceApproximation) -> np.ndarray:
    """Dense symmetric matrix for an approximation.

    Expands the compact form mu* I + sum_i deltas_i u_i u_i^T; when a dense
    matrix was already materialized a copy of it is returned.
    """
    if approx.dense is not None:
        return approx.dense.copy()
    return _expand_compact(approx.compact)


def _expand_compact(compact: CompactForm) -> np.ndarray:
    c = compact.columns
    out = (c * compact.deltas) @ c.T
    out = 0.5 * (out + out.T)
    np.fill_diagonal(out, out.diagonal() + compact.mu_star)
    return out


def _resolve_form(form: str, p: int) -> str:
    if form not in FORMS:
        raise InvalidInput(f"unknown form {form!r}, expected one of {FORMS}")
    if form == "auto":
        return "compact" if p > AUTO_DENSE_MAX_DIM else "dense"
    return form


def _compact_from(basis: SpectralForm, solution: TruncationSolution) -> CompactForm:
    lam_star = solution.lambda_star
    mu = solution.mu
    if solution.feasible:
        # No clamp level applies; keep only the strictly-above-minimum part.
        k = int(np.count_nonzero(lam_star > mu))
    else:
        k = solution.beta - 1
    return CompactForm(mu, basis.vectors[:, :k].copy(), lam_star[:k] - mu)


def _frobenius_error(spectrum: EigenSpectrum, solution: TruncationSolution) -> float:
    return float(np.linalg.norm(solution.lambda_star - spectrum.values))


def solve_fu_spt(
    s,
    kappa: float,
    form: str = "auto",
    rank_tolerance: float | None = None,
) -> CovarianceApproximation:
    """Solve from a covariance matrix via its full eigendecomposition."""
    sym = _as_symmetric(s)
    resolved = _resolve_form(form, sym.p)
    basis = symmetric_eigendecomposition(sym)
    spectrum = spectrum_from_eigenvalues(basis.values, rank_tolerance)
    solution = search_optimal(spectrum, kappa)
    compact = _compact_from(basis, solution)
    dense = None
    if resolved == "dense":
        if solution.feasible:
            dense = sym.values.copy()
        else:
            u = basis.vectors
            dense = (u * solution.lambda_star) @ u.T
            dense = 0.5 * (dense + dense.T)
    return CovarianceApproximation(
        solution=solution,
        algorithm="fu-spt",
        compact=compact,
        dense=dense,
        frobenius_error=_frobenius_error(spectrum, solution),
    )


def _scaled_data(x, center: bool) -> tuple[np.ndarray, int, int]:
    data = _as_data_matrix(x)
    p, n = data.p, data.n
    if p < n:
        raise ShapeError(
            f"SVD pipelines expect the high-dimensional orientation p >= n, got {p} x {n}"
        )
    values = data.values
    if center:
        values = values - values.mean(axis=1, keepdims=True)
    return values / math.sqrt(n), p, n


def _solve_from_factor(
    basis: SpectralForm,
    p: int,
    n: int,
    kappa: float,
    resolved_form: str,
    algorithm: str,
    rank_tolerance: float | None,
) -> CovarianceApproximation:
    eigenvalues = np.concatenate([basis.values**2, np.zeros(p - n)])
    spectrum = spectrum_from_eigenvalues(eigenvalues, rank_tolerance)
    solution = search_optimal(spectrum, kappa)
    compact = _compact_from(basis, solution)
    dense = _expand_compact(compact) if resolved_form == "dense" else None
    return CovarianceApproximation(
        solution=solution,
        algorithm=algorithm,
        compact=compact,
        dense=dense,
        frobenius_error=_frobenius_error(spectrum, solution),
    )


def spectrum_of_data(
    x, backend: str = "lapack", rank_tolerance: float | None = None
) -> EigenSpectrum:
    """Sample-covariance spectrum of a data matrix, by the cheapest route.

    Tall matrices (p >= n) go through the thin SVD of X / sqrt(n); wide ones
    through the eigendecomposition of X X^T / n.
    """
    data = _as_data_matrix(x)
    if data.p >= data.n:
        basis = thin_svd(data.values / math.sqrt(data.n), backend=backend)
        eigenvalues = np.concatenate([basis.values**2, np.zeros(data.p - data.n)])
    else:
        gram = data.values @ data.values.T / data.n
        eigenvalues = symmetric_eigendecomposition(0.5 * (gram + gram.T)).values
    return spectrum_from_eigenvalues(eigenvalues, rank_tolerance)


def solve_gr_svd(
    x,
    kappa: float,
    form: str = "auto",
    backend: str = "lapack",
    rank_tolerance: float | None = None,
    center: bool = False,
) -> CovarianceApproximation:
    """Solve from a tall data matrix via the thin SVD of X / sqrt(n)."""
    scaled, p, n = _scaled_data(x, center)
    basis = thin_svd(scaled, backend=backend)
    return _solve_from_factor(basis, p, n, kappa, _resolve_form(form, p), "gr-svd", rank_tolerance)


def solve_mod_svd(
    x,
    kappa: float,
    form: str = "auto",
    backend: str = "lapack",
    rank_tolerance: float | None = None,
    center: bool = False,
) -> CovarianceApproximation:
    """Solve from a tall data matrix via QR of X / sqrt(n) and an SVD of R."""
    scaled, p, n = _scaled_data(x, center)
    factored = mod_svd(scaled, backend=backend)
    return _solve_from_factor(
        factored.left, p, n, kappa, _resolve_form(form, p), "mod-svd", rank_tolerance
    )


__all__ = [
    "CompactForm",
    "CovarianceApproximation",
    "densify",
    "solve_fu_spt",
    "solve_gr_svd",
    "solve_mod_svd",
    "spectrum_of_data",
    "SymmetricMatrix",
]
