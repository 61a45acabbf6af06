"""Seeded synthetic data for the experiments.

All generators are deterministic per (parameters, seed).  Repetitions derive
independent substreams by mixing the base seed with the repetition index, so
aggregates are reproducible regardless of evaluation order; the environment
variable ``C3MA_THREADS`` caps optional thread-parallel repetitions.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .linalg import SpectralForm, SymmetricMatrix

SPACINGS = ("linear", "log")


def rng_for(seed, *stream: int) -> np.random.Generator:
    """Deterministic generator for a seed plus an optional substream index.

    ``seed`` may be an int or a tuple of ints; substream indices are appended
    to the entropy so repetitions get independent, reproducible streams.
    """
    base = (int(seed),) if np.isscalar(seed) else tuple(int(s) for s in seed)
    entropy = base + tuple(int(s) for s in stream)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def worker_count() -> int:
    """Thread cap for parallel repetitions, from C3MA_THREADS (default 1)."""
    raw = os.environ.get("C3MA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def gaussian_matrix(p: int, n: int, seed: int) -> np.ndarray:
    """p x n matrix of i.i.d. standard normal entries."""
    if p < 1 or n < 1:
        raise InvalidInput("dimensions must be >= 1")
    return rng_for(seed).standard_normal((p, n))


def haar_orthogonal(p: int, seed: int) -> np.ndarray:
    """Haar-distributed orthogonal matrix: sign-fixed QR of a Gaussian matrix."""
    if p < 1:
        raise InvalidInput("dimension must be >= 1")
    q, r = np.linalg.qr(rng_for(seed).standard_normal((p, p)))
    diag = np.diag(r)
    return q * np.sign(np.where(diag == 0, 1.0, diag))


@dataclass(frozen=True)
class SigmaSpec:
    """Recipe for a population covariance with condition number 10**(2 * exponent).

    Eigenvalues run from 10**exponent down to 10**-exponent, equally spaced
    either linearly (default) or geometrically, in a Haar-random eigenbasis.
    """

    p: int
    exponent: float
    spacing: str = "linear"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.p < 2:
            raise InvalidInput("population covariance needs p >= 2")
        if self.exponent < 0:
            raise InvalidInput("exponent must be >= 0")
        if self.spacing not in SPACINGS:
            raise InvalidInput(f"spacing must be one of {SPACINGS}")


def make_sigma(spec: SigmaSpec) -> tuple[SymmetricMatrix, SpectralForm]:
    """Assemble the population covariance and its spectral form."""
    top = 10.0**spec.exponent
    bottom = 10.0**-spec.exponent
    if spec.spacing == "linear":
        lam = np.linspace(top, bottom, spec.p)
    else:
        lam = np.logspace(spec.exponent, -spec.exponent, spec.p)
    basis = haar_orthogonal(spec.p, spec.seed)
    sigma = (basis * lam) @ basis.T
    return SymmetricMatrix(0.5 * (sigma + sigma.T)), SpectralForm(basis, lam, spec.p)


def sample_mvn(sigma: SpectralForm, n: int, seed: int) -> np.ndarray:
    """n zero-mean Gaussian observations with covariance U diag(lam) U^T.

    Uses the symmetric square root U diag(sqrt(lam)) U^T; the covariance must
    be positive definite.
    """
    if n < 1:
        raise InvalidInput("need n >= 1 observations")
    if sigma.values[-1] <= 0:
        raise InvalidInput("covariance must be positive definite")
    root = (sigma.vectors * np.sqrt(sigma.values)) @ sigma.vectors.T
    z = rng_for(seed).standard_normal((sigma.full_dimension, n))
    return root @ z


def sample_covariance(x) -> np.ndarray:
    """Second-moment matrix X X^T / n, symmetrized exactly."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 2:
        raise InvalidInput("data matrix must be 2-d")
    s = arr @ arr.T / arr.shape[1]
    return 0.5 * (s + s.T)


def eigen_dispersion(
    p: int, n: int, reps: int, seed: int, threads: int | None = None
) -> np.ndarray:
    """Mean descending eigenvalues of the sample covariance under identity truth.

    Draws ``reps`` independent p x n standard normal samples and averages the
    sorted eigenvalues of X X^T / n.
    """
    if reps < 1:
        raise InvalidInput("need reps >= 1")

    def one(rep: int) -> np.ndarray:
        x = rng_for(seed, rep).standard_normal((p, n))
        return np.linalg.eigvalsh(sample_covariance(x))[::-1]

    workers = worker_count() if threads is None else max(1, int(threads))
    if workers == 1:
        total = sum(one(rep) for rep in range(reps))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            total = sum(pool.map(one, range(reps)))
    return total / reps
