"""Brute-force verifiers kept independent of the fast solver.

``golden_section_minimize_f`` minimizes the clamp objective by golden-section
search over the bracket (0, lam_1/kappa], then removes the discretization
error with one exact stationary-point evaluation on the bracketed segment.
``feasible_set_probe`` samples random matrices from the feasible set of the
original matrix problem and reports the best Frobenius distance found.

Everything here is re-derived from first principles (the objective is
evaluated through the clamp formula, the segment stationary point through its
own local derivation) so these routines can certify the closed-form solver;
only the :class:`~c3ma.truncation.EigenSpectrum` container is shared.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidInput, NotApplicable
from .truncation import EigenSpectrum

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _clamp_objective(mu: float, lam: np.ndarray, kappa: float) -> float:
    clamped = np.minimum(np.maximum(mu, lam), kappa * mu)
    return float(np.sum((clamped - lam) ** 2))


def _segment_stationary_point(t: float, lam: np.ndarray, kappa: float) -> float | None:
    """Exact minimizer of the local quadratic active at clamp level t.

    With A = {i: lam_i > kappa*t} lowered and B = {i: lam_i < t} raised, the
    objective restricted to that activity pattern is
    sum_A (kappa*mu - lam_i)^2 + sum_B (mu - lam_i)^2 and its stationary
    point follows from setting the derivative to zero.
    """
    lowered = lam > kappa * t
    raised = lam < t
    denominator = kappa * kappa * int(lowered.sum()) + int(raised.sum())
    if denominator == 0:
        return None
    numerator = kappa * float(lam[lowered].sum()) + float(lam[raised].sum())
    return numerator / denominator


def golden_section_minimize_f(
    spectrum: EigenSpectrum, kappa: float, tolerance: float | None = None
) -> float:
    """Golden-section minimizer of the clamp objective, exactly refined.

    Raises :class:`NotApplicable` when the spectrum already satisfies the
    bound (the objective is flat at zero there and the bracket argument does
    not apply).
    """
    kappa = float(kappa)
    lam = spectrum.values
    if spectrum.positive_count == spectrum.p and lam[0] <= kappa * lam[-1]:
        raise NotApplicable("spectrum already satisfies the condition bound")
    lam1 = float(lam[0])
    if tolerance is None:
        tolerance = 1e-12 * lam1

    lo = 0.0
    hi = lam1 / kappa
    x1 = hi - _INV_GOLDEN * (hi - lo)
    x2 = lo + _INV_GOLDEN * (hi - lo)
    f1 = _clamp_objective(x1, lam, kappa)
    f2 = _clamp_objective(x2, lam, kappa)
    while hi - lo > tolerance:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_GOLDEN * (hi - lo)
            f1 = _clamp_objective(x1, lam, kappa)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_GOLDEN * (hi - lo)
            f2 = _clamp_objective(x2, lam, kappa)

    # The bracket is far narrower than any breakpoint gap that matters, so
    # the exact stationary point of the segment seen at lo, mid or hi removes
    # the remaining discretization error.  Keep whichever candidate evaluates
    # lowest; the raw midpoint guarantees we never do worse than the bracket.
    mid = 0.5 * (lo + hi)
    candidates = []
    for t in (max(lo, 0.25 * mid), mid, hi):
        refined = _segment_stationary_point(t, lam, kappa)
        if refined is not None and refined > 0.0:
            candidates.append(refined)
    candidates.append(mid)  # fallback; ties resolve toward the refinements
    return min(candidates, key=lambda mu: _clamp_objective(mu, lam, kappa))


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius distance used by the probe; exposed for exactness tests."""
    return float(np.linalg.norm(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))


def _haar_basis(rng: np.random.Generator, p: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    return q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))


def feasible_set_probe(
    s_matrix: np.ndarray, kappa: float, trials: int, seed: int
) -> float:
    """Best Frobenius distance to ``s_matrix`` over random feasible matrices.

    Each trial draws an orthonormal basis (alternating between a random one
    and the eigenbasis of the input, which lets the probe approach the true
    optimum) and a positive level t, clips a spectrum into [t, kappa*t], and
    assembles a feasible candidate.  Small instances only (p <= 12).
    """
    s = np.asarray(s_matrix, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise InvalidInput("probe requires a square matrix")
    p = s.shape[0]
    if p > 12:
        raise InvalidInput("probe is restricted to p <= 12")
    kappa = float(kappa)
    rng = np.random.default_rng(seed)
    base_evals, base_vecs = np.linalg.eigh(s)
    scale = max(float(np.abs(base_evals).max()), 1e-12)

    best = np.inf
    for trial in range(int(trials)):
        if trial % 2 == 0:
            basis = base_vecs
            spectrum = base_evals
        else:
            basis = _haar_basis(rng, p)
            spectrum = rng.uniform(0.0, scale, size=p)
        t = scale * 10.0 ** rng.uniform(-6.0, 0.0)
        clipped = np.clip(spectrum, t, kappa * t)
        candidate = (basis * clipped) @ basis.T
        best = min(best, frobenius_distance(candidate, s))
    return best
