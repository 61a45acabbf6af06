"""Behaviour of the clamp levels as functions of the condition bound.

With the active index pair (alpha, beta) held fixed, the lower clamp level
mu(kappa) and the upper level nu(kappa) = kappa * mu(kappa) are smooth,
unimodal, and not monotone in kappa; their interior maximizers have the
closed forms implemented here.  ``trace_path`` sweeps the solver over a
kappa grid and records the index paths and their successive differences,
which is how nonmonotonicity is observed in practice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidIndex, InvalidInput, NotApplicable
from .truncation import (
    EigenSpectrum,
    TruncationSolution,
    _check_index_pair,
    candidate_mu,
    search_optimal,
)


@dataclass(frozen=True)
class TruncationPath:
    """Record of a kappa sweep: index/level sequences and their differences.

    Feasible grid points are encoded as (alpha, beta) = (0, p + 1) so the
    successive differences stay well-defined across the feasibility
    boundary; their mu is the smallest eigenvalue (no clamping applied) and
    nu = kappa * mu by construction.
    """

    kappa_grid: np.ndarray
    alpha_seq: np.ndarray
    beta_seq: np.ndarray
    mu_seq: np.ndarray
    nu_seq: np.ndarray
    diff_alpha: np.ndarray
    diff_beta: np.ndarray
    feasible_seq: np.ndarray

    def __post_init__(self) -> None:
        size = self.kappa_grid.size
        for name in ("alpha_seq", "beta_seq", "mu_seq", "nu_seq", "feasible_seq"):
            if getattr(self, name).size != size:
                raise InvalidInput(f"{name} length does not match the grid")
        for name in ("diff_alpha", "diff_beta"):
            if getattr(self, name).size != max(size - 1, 0):
                raise InvalidInput(f"{name} must have grid length - 1 entries")


def mu_of_kappa(alpha: int, beta: int, spectrum: EigenSpectrum, kappa: float) -> float:
    """Lower clamp level as a function of kappa on a fixed (alpha, beta).

    Same formula as :func:`~c3ma.truncation.candidate_mu`; the caller is
    responsible for (alpha, beta) being the active pair at this kappa.
    """
    return candidate_mu(alpha, beta, spectrum, kappa)


def nu_of_kappa(alpha: int, beta: int, spectrum: EigenSpectrum, kappa: float) -> float:
    """Upper clamp level kappa * mu(kappa) on a fixed (alpha, beta)."""
    return kappa * candidate_mu(alpha, beta, spectrum, kappa)


def kappa_mu_maximizer(alpha: int, beta: int, spectrum: EigenSpectrum) -> float:
    """Maximizer of mu(kappa) on [1, inf): max(sqrt(r^2 + q) - r, 1).

    Here r is the trailing eigenvalue sum over the leading one and
    q = (p - beta + 1) / alpha.
    """
    alpha, beta = _check_index_pair(alpha, beta, spectrum.p)
    lam = spectrum.values
    top = float(lam[:alpha].sum())
    if top <= 0.0:
        raise InvalidIndex("leading eigenvalue sum must be positive")
    r = float(lam[beta - 1 :].sum()) / top
    q = (spectrum.p - beta + 1) / alpha
    return max(math.sqrt(r * r + q) - r, 1.0)


def kappa_nu_maximizer(alpha: int, beta: int, spectrum: EigenSpectrum) -> float:
    """Maximizer of nu(kappa): q/r + sqrt((q/r)^2 + q), +inf when r = 0.

    A vanishing trailing sum makes nu increasing without an interior
    maximum, so the sentinel +inf is returned instead of an error.
    """
    alpha, beta = _check_index_pair(alpha, beta, spectrum.p)
    lam = spectrum.values
    bottom = float(lam[beta - 1 :].sum())
    if bottom <= 0.0:
        return math.inf
    top = float(lam[:alpha].sum())
    q = (spectrum.p - beta + 1) / alpha
    q_over_r = q * top / bottom
    return q_over_r + math.sqrt(q_over_r * q_over_r + q)


def in_interval_stat(solution: TruncationSolution, spectrum: EigenSpectrum) -> bool:
    """Whether kappa falls inside [kappa_mu, kappa_nu] of its own (alpha*, beta*)."""
    if solution.feasible:
        raise NotApplicable("interval statistic needs the truncating branch")
    low = kappa_mu_maximizer(solution.alpha, solution.beta, spectrum)
    high = kappa_nu_maximizer(solution.alpha, solution.beta, spectrum)
    return bool(low <= solution.kappa <= high)


def trace_path(spectrum: EigenSpectrum, kappa_grid) -> TruncationPath:
    """Run the solver over an ascending kappa grid and record the path."""
    grid = np.asarray(kappa_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidInput("kappa grid must be a nonempty 1-d vector")
    if np.any(np.diff(grid) <= 0):
        raise InvalidInput("kappa grid must be strictly ascending")
    p = spectrum.p
    alpha = np.empty(grid.size, dtype=int)
    beta = np.empty(grid.size, dtype=int)
    mu = np.empty(grid.size)
    nu = np.empty(grid.size)
    feasible = np.empty(grid.size, dtype=bool)
    for idx, kappa in enumerate(grid):
        sol = search_optimal(spectrum, kappa)
        feasible[idx] = sol.feasible
        alpha[idx] = 0 if sol.feasible else sol.alpha
        beta[idx] = p + 1 if sol.feasible else sol.beta
        mu[idx] = sol.mu
        nu[idx] = sol.nu
    return TruncationPath(
        kappa_grid=grid,
        alpha_seq=alpha,
        beta_seq=beta,
        mu_seq=mu,
        nu_seq=nu,
        diff_alpha=np.diff(alpha),
        diff_beta=np.diff(beta),
        feasible_seq=feasible,
    )
