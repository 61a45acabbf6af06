"""Closed-form solver for the condition-number-constrained diagonal problem.

Given the descending eigenvalues lam_1 >= ... >= lam_p >= 0 of a sample
covariance matrix and a bound kappa >= 1, the nearest admissible spectrum in
the least-squares sense clamps every eigenvalue into the band [mu, kappa*mu],

    lam*_i = min(max(mu, lam_i), kappa * mu),

where mu is the minimizer of the strictly convex piecewise-quadratic

    f(mu) = sum_{lam_i < mu} (mu - lam_i)^2
          + sum_{kappa*mu < lam_i} (kappa*mu - lam_i)^2.

f' is continuous, strictly increasing and piecewise linear with breakpoints
at {lam_i} (an eigenvalue starts being raised) and {lam_i / kappa} (an
eigenvalue stops being lowered).  On the segment where exactly the top
``alpha`` entries are lowered and entries ``beta..p`` are raised, the
stationary point is

    mu_{alpha,beta} = (kappa * sum_{i<=alpha} lam_i + sum_{i>=beta} lam_i)
                      / (alpha * kappa^2 + p - beta + 1).

``search_optimal`` walks the merged sorted breakpoint list once, updating the
clamp-set counts and sums incrementally, finds the segment where f' changes
sign, and evaluates the stationary point there.  The minimizer always lies in
(0, lam_1/kappa], so at most one pass over ~2m breakpoints (m = number of
positive eigenvalues) is needed.

Indices ``alpha`` and ``beta`` are 1-based positions in the descending
spectrum throughout, with sentinels lam_0 = +inf and lam_{p+1} = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleZeroMatrix, InvalidIndex, InvalidInput, InvalidKappa

# Eigenvalues of a PSD matrix in [-PSD_ROUNDOFF_RTOL * lam_1, 0) are treated
# as eigensolver round-off and clamped to zero; anything lower is rejected.
PSD_ROUNDOFF_RTOL = 1e-10

# Default relative rank cut: entries <= p * 2**-52 * lam_1 are treated as zero.
DEFAULT_RANK_RTOL_PER_DIM = 2.0**-52


@dataclass(frozen=True)
class EigenSpectrum:
    """Descending nonnegative eigenvalues with an explicit numerical rank.

    ``values`` has length p, is sorted descending with all entries >= 0; the
    trailing ``p - positive_count`` entries are exactly zero.  Use
    :func:`spectrum_from_eigenvalues` to build one from raw eigensolver
    output (it handles round-off clamping and the rank cut).
    """

    values: np.ndarray
    positive_count: int

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size == 0:
            raise InvalidInput("spectrum must be a nonempty 1-d vector")
        if not np.all(np.isfinite(values)):
            raise InvalidInput("spectrum contains non-finite entries")
        if np.any(np.diff(values) > 0):
            raise InvalidInput("spectrum must be sorted in descending order")
        if values[-1] < 0:
            raise InvalidInput("spectrum contains negative entries")
        m = int(self.positive_count)
        object.__setattr__(self, "positive_count", m)
        if m < 1:
            raise InfeasibleZeroMatrix("spectrum has no positive eigenvalues")
        if m > values.size or values[m - 1] <= 0:
            raise InvalidInput("positive_count inconsistent with values")
        if m < values.size and values[m] != 0:
            raise InvalidInput("entries beyond positive_count must be exactly zero")

    @property
    def p(self) -> int:
        return self.values.size


def spectrum_from_eigenvalues(values, rank_tolerance: float | None = None) -> EigenSpectrum:
    """Build an :class:`EigenSpectrum` from raw (possibly unsorted) eigenvalues.

    Small negative entries caused by round-off on a PSD input are clamped to
    zero; genuinely negative entries raise :class:`InvalidInput`.  Entries at
    or below ``rank_tolerance * lam_1`` (default ``p * 2**-52``) are zeroed so
    the solver's rank bookkeeping matches the numerical rank of the data.
    """
    lam = np.sort(np.asarray(values, dtype=float))[::-1].copy()
    if lam.ndim != 1 or lam.size == 0:
        raise InvalidInput("spectrum must be a nonempty 1-d vector")
    if not np.all(np.isfinite(lam)):
        raise InvalidInput("spectrum contains non-finite entries")
    lam1 = lam[0]
    if lam1 <= 0.0:
        if lam1 < 0.0:
            raise InvalidInput("matrix is not positive semidefinite")
        raise InfeasibleZeroMatrix("all eigenvalues are zero")
    if lam[-1] < -PSD_ROUNDOFF_RTOL * lam1:
        raise InvalidInput(
            "matrix has negative eigenvalues beyond round-off tolerance"
        )
    np.clip(lam, 0.0, None, out=lam)
    if rank_tolerance is None:
        rank_tolerance = lam.size * DEFAULT_RANK_RTOL_PER_DIM
    lam[lam <= rank_tolerance * lam1] = 0.0
    return EigenSpectrum(lam, int(np.count_nonzero(lam)))


@dataclass(frozen=True)
class TruncationSolution:
    """Optimal clamp levels and clamped spectrum for one bound kappa.

    ``alpha``/``beta`` are 1-based: entries 1..alpha are lowered to
    ``nu = kappa * mu``, entries beta..p are raised to ``mu``, entries
    strictly between are unchanged.  On the feasible branch (the input
    spectrum already satisfies the bound) both are None, ``mu`` is the
    smallest eigenvalue and ``lambda_star`` equals the input spectrum.
    ``candidates_evaluated`` counts the breakpoint segments actually tested.
    """

    kappa: float
    alpha: int | None
    beta: int | None
    mu: float
    nu: float
    lambda_star: np.ndarray
    feasible: bool
    candidates_evaluated: int

    @property
    def achieved_condition_number(self) -> float:
        return float(self.lambda_star[0] / self.lambda_star[-1])


def clamp_eigenvalue(lambda_hat: float, mu: float, kappa: float) -> float:
    """Clamp a single eigenvalue into the band [mu, kappa * mu]."""
    return min(max(mu, lambda_hat), kappa * mu)


def clamp_spectrum(values: np.ndarray, mu: float, kappa: float) -> np.ndarray:
    """Vectorized :func:`clamp_eigenvalue`; preserves descending order."""
    return np.minimum(np.maximum(mu, values), kappa * mu)


def objective(mu: float, spectrum: EigenSpectrum, kappa: float) -> float:
    """Squared distance from the spectrum to its clamp at level mu."""
    lam = spectrum.values
    low = lam[lam < mu]
    high = lam[lam > kappa * mu]
    return float(np.sum((mu - low) ** 2) + np.sum((kappa * mu - high) ** 2))


def objective_derivative(mu: float, spectrum: EigenSpectrum, kappa: float) -> float:
    """Derivative of :func:`objective` in mu; strictly increasing."""
    lam = spectrum.values
    low = lam[lam < mu]
    high = lam[lam > kappa * mu]
    return float(2.0 * np.sum(mu - low) + 2.0 * kappa * np.sum(kappa * mu - high))


def _check_index_pair(alpha: int, beta: int, p: int) -> tuple[int, int]:
    alpha = int(alpha)
    beta = int(beta)
    if not (1 <= alpha < beta <= p + 1):
        raise InvalidIndex(f"need 1 <= alpha < beta <= p+1, got ({alpha}, {beta}) with p={p}")
    return alpha, beta


def candidate_mu(alpha: int, beta: int, spectrum: EigenSpectrum, kappa: float) -> float:
    """Stationary point of the clamp objective on the segment (alpha, beta).

    The lower sum runs from beta through p, so trailing zeros contribute
    nothing and the rank-deficient and full-rank cases share one formula.
    """
    alpha, beta = _check_index_pair(alpha, beta, spectrum.p)
    lam = spectrum.values
    numerator = kappa * float(lam[:alpha].sum()) + float(lam[beta - 1 :].sum())
    denominator = alpha * kappa * kappa + spectrum.p - beta + 1
    return numerator / denominator


def _lam_extended(lam: np.ndarray, i: int) -> float:
    """1-based indexing with sentinels lam_0 = +inf and lam_{p+1} = 0."""
    if i == 0:
        return np.inf
    if i == lam.size + 1:
        return 0.0
    return float(lam[i - 1])


def region_contains(
    alpha: int, beta: int, mu: float, spectrum: EigenSpectrum, kappa: float
) -> bool:
    """Test lam_alpha >= kappa*mu > lam_{alpha+1} and lam_{beta-1} >= mu > lam_beta."""
    alpha, beta = _check_index_pair(alpha, beta, spectrum.p)
    lam = spectrum.values
    nu = kappa * mu
    upper = _lam_extended(lam, alpha) >= nu > _lam_extended(lam, alpha + 1)
    lower = _lam_extended(lam, beta - 1) >= mu > _lam_extended(lam, beta)
    return bool(upper and lower)


def search_optimal(spectrum: EigenSpectrum, kappa: float) -> TruncationSolution:
    """Minimize the clamp objective over mu > 0 by one breakpoint walk.

    Returns the unique global minimizer.  If the spectrum is full rank and
    already satisfies lam_1 <= kappa * lam_p, no truncation is needed and the
    spectrum is returned unchanged with the feasible flag set.  kappa = 1 is
    handled by the closed form mu = mean(lam) since the band degenerates to a
    point.  At most 2m + 1 segments are ever tested (m positive eigenvalues).
    """
    kappa = float(kappa)
    if not np.isfinite(kappa) or kappa < 1.0:
        raise InvalidKappa(f"kappa must be a finite real >= 1, got {kappa}")
    lam = spectrum.values
    p = spectrum.p
    m = spectrum.positive_count

    if m == p and lam[0] <= kappa * lam[-1]:
        mu = float(lam[-1])
        return TruncationSolution(
            kappa=kappa,
            alpha=None,
            beta=None,
            mu=mu,
            nu=kappa * mu,
            lambda_star=lam.copy(),
            feasible=True,
            candidates_evaluated=0,
        )

    if kappa == 1.0:
        mu = float(lam.mean())
        alpha = int(np.count_nonzero(lam >= mu))
        return TruncationSolution(
            kappa=kappa,
            alpha=alpha,
            beta=alpha + 1,
            mu=mu,
            nu=mu,
            lambda_star=np.full(p, mu),
            feasible=False,
            candidates_evaluated=1,
        )

    # Ascending positive eigenvalues drive both event streams: crossing lam_i
    # moves entry i into the raised set, crossing lam_i / kappa removes it
    # from the lowered set.  Only breakpoints inside (0, lam_1 / kappa] can
    # matter because the minimizer lives there.
    pos_asc = lam[:m][::-1]
    top_limit = lam[0] / kappa
    low_events = pos_asc[pos_asc <= top_limit]

    n_low = p - m  # eigenvalues currently below mu (starts with the zeros)
    s_low = 0.0
    n_high = m  # eigenvalues currently above kappa * mu
    s_high = float(pos_asc.sum())

    i = 0  # next low event (value = low_events[i])
    j = 0  # next high event (value = pos_asc[j] / kappa, leaving entry pos_asc[j])
    candidates = 0
    region = None
    found = None
    while i < low_events.size or j < pos_asc.size:
        v_low = low_events[i] if i < low_events.size else np.inf
        v_high = pos_asc[j] / kappa if j < pos_asc.size else np.inf
        v = min(v_low, v_high)
        # Current segment ends at v; f' is linear on it with the state below.
        candidates += 1
        region = (n_high, p - n_low + 1)
        slope = 2.0 * n_low + 2.0 * kappa * kappa * n_high
        intercept = -2.0 * s_low - 2.0 * kappa * s_high
        if slope * v + intercept >= 0.0:
            found = region
            break
        # Consume every event at exactly v so repeated eigenvalues collapse
        # into a single zero-length step.
        while i < low_events.size and low_events[i] == v:
            n_low += 1
            s_low += float(low_events[i])
            i += 1
        while j < pos_asc.size and pos_asc[j] / kappa == v:
            n_high -= 1
            s_high -= float(pos_asc[j])
            j += 1
    if found is None:
        # f'(lam_1 / kappa) > 0 holds mathematically on this branch; if
        # rounding kept it negative the optimum sits in the last segment.
        found = region

    alpha, beta = found
    mu = candidate_mu(alpha, beta, spectrum, kappa)
    nu = kappa * mu
    return TruncationSolution(
        kappa=kappa,
        alpha=alpha,
        beta=beta,
        mu=mu,
        nu=nu,
        lambda_star=clamp_spectrum(lam, mu, kappa),
        feasible=False,
        candidates_evaluated=candidates,
    )
