"""Dense containers and the factorizations feeding the solver pipelines.

Three factorizations are exposed: full symmetric eigendecomposition, thin SVD
of a tall matrix, and the combined QR-then-SVD-of-R variant whose composition
(QR factorization, SVD of the small triangular factor, block assembly of the
left factor through the implicit Q) is spelled out here.

Two interchangeable backends supply the dense kernels:

* ``"lapack"`` (default) delegates to numpy/scipy,
* ``"reference"`` uses the hand-written Householder/Golub-Reinsch kernels
  from :mod:`c3ma.golub_reinsch`.

The symmetric eigendecomposition always uses LAPACK; the backend switch only
concerns the two SVD routes, which are the ones whose relative cost the
benchmark commands compare.  Singular/eigen vector signs are canonicalized so
that the largest-magnitude entry of every column is positive, making outputs
comparable across pipelines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg import lapack as _lapack

from .errors import InvalidInput, ShapeError
from .golub_reinsch import HouseholderSequence, golub_reinsch_svd, householder_qr

BACKENDS = ("lapack", "reference")

# Inputs whose relative asymmetry exceeds this are rejected rather than
# silently symmetrized.
SYMMETRY_RTOL = 1e-8


def _check_backend(backend: str) -> str:
    if backend not in BACKENDS:
        raise InvalidInput(f"unknown backend {backend!r}, expected one of {BACKENDS}")
    return backend


@dataclass(frozen=True)
class DataMatrix:
    """p x n observation matrix: rows are variables, columns are observations."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise InvalidInput("data matrix must be 2-d with p, n >= 1")
        if not np.all(np.isfinite(values)):
            raise InvalidInput("data matrix contains non-finite entries")

    @property
    def p(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class SymmetricMatrix:
    """Square matrix stored exactly symmetric."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise InvalidInput("symmetric matrix must be square")
        if not np.all(np.isfinite(values)):
            raise InvalidInput("matrix contains non-finite entries")
        if not np.array_equal(values, values.T):
            raise InvalidInput("matrix is not stored symmetric; use symmetrize()")

    @property
    def p(self) -> int:
        return self.values.shape[0]


def symmetrize(a: np.ndarray, rtol: float = SYMMETRY_RTOL) -> SymmetricMatrix:
    """Average away round-off asymmetry; reject asymmetry beyond rtol."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInput("symmetric matrix must be square")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("matrix contains non-finite entries")
    scale = float(np.abs(arr).max())
    defect = float(np.abs(arr - arr.T).max())
    if defect > rtol * max(scale, np.finfo(float).tiny):
        raise InvalidInput(f"matrix asymmetry {defect:.3e} exceeds tolerance")
    return SymmetricMatrix(0.5 * (arr + arr.T))


def _as_symmetric(a) -> SymmetricMatrix:
    return a if isinstance(a, SymmetricMatrix) else symmetrize(a)


def _as_data_matrix(x) -> DataMatrix:
    return x if isinstance(x, DataMatrix) else DataMatrix(x)


@dataclass(frozen=True)
class SpectralForm:
    """Orthonormal column block paired with descending values.

    ``vectors`` is p x k with orthonormal columns (k = p for a full
    eigendecomposition, k = n for a thin SVD of a p x n matrix); ``values``
    holds the matching eigenvalues or singular values sorted descending.
    """

    vectors: np.ndarray
    values: np.ndarray
    full_dimension: int

    def __post_init__(self) -> None:
        vectors = np.asarray(self.vectors, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "values", values)
        if vectors.ndim != 2 or values.ndim != 1:
            raise InvalidInput("spectral form needs a 2-d factor and 1-d values")
        if vectors.shape != (self.full_dimension, values.size):
            raise InvalidInput("spectral form shapes are inconsistent")
        if not (np.all(np.isfinite(vectors)) and np.all(np.isfinite(values))):
            raise InvalidInput("spectral form contains non-finite entries")
        if np.any(np.diff(values) > 0):
            raise InvalidInput("spectral values must be sorted descending")

    @property
    def k(self) -> int:
        return self.values.size

    def orthonormality_defect(self) -> float:
        v = self.vectors
        return float(np.abs(v.T @ v - np.eye(v.shape[1])).max())


def _canonicalize_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip column signs so each column's largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0.0] = 1.0
    return vectors * signs


def symmetric_eigendecomposition(s) -> SpectralForm:
    """Full eigendecomposition of a symmetric matrix, values descending."""
    sym = _as_symmetric(s)
    w, v = np.linalg.eigh(sym.values)
    return SpectralForm(_canonicalize_signs(v[:, ::-1]), w[::-1].copy(), sym.p)


def thin_svd(a, backend: str = "lapack") -> SpectralForm:
    """Thin SVD of a tall matrix; only the left factor is returned.

    ``.vectors`` holds the p x n left singular vectors and ``.values`` the
    descending singular values; the right factor is discarded.
    """
    _check_backend(backend)
    x = _as_data_matrix(a)
    if x.p < x.n:
        raise ShapeError(f"thin SVD expects p >= n, got {x.p} x {x.n}")
    if backend == "lapack":
        u, s, _ = np.linalg.svd(x.values, full_matrices=False)
    else:
        u, s = golub_reinsch_svd(x.values)
    return SpectralForm(_canonicalize_signs(u), s, x.p)


class LapackQ:
    """Implicit Q from LAPACK geqrf output, applied through ormqr."""

    def __init__(self, qr: np.ndarray, tau: np.ndarray):
        self._qr = np.asfortranarray(qr)
        self._tau = tau

    @property
    def rows(self) -> int:
        return self._qr.shape[0]

    def _apply(self, b: np.ndarray, trans: str) -> np.ndarray:
        mat = np.asfortranarray(b, dtype=float)
        single = mat.ndim == 1
        if single:
            mat = mat.reshape(-1, 1)
        if mat.shape[0] != self.rows:
            raise ShapeError(
                f"operand has {mat.shape[0]} rows, reflectors act on {self.rows}"
            )
        _, work, info = _lapack.dormqr("L", trans, self._qr, self._tau, mat, -1)
        if info != 0:
            raise InvalidInput(f"ormqr workspace query failed with info={info}")
        lwork = max(int(work[0]), mat.shape[1])
        out, _, info = _lapack.dormqr("L", trans, self._qr, self._tau, mat, lwork)
        if info != 0:
            raise InvalidInput(f"ormqr failed with info={info}")
        return out[:, 0] if single else out

    def apply(self, b: np.ndarray) -> np.ndarray:
        """Return Q @ b without forming Q."""
        return self._apply(b, "N")

    def apply_transpose(self, b: np.ndarray) -> np.ndarray:
        """Return Q^T @ b without forming Q."""
        return self._apply(b, "T")


QFactor = LapackQ | HouseholderSequence


@dataclass(frozen=True)
class ModSvdResult:
    """Composed SVD: thin left factor, singular values, and the implicit Q."""

    left: SpectralForm
    q_factor: QFactor

    @property
    def singular_values(self) -> np.ndarray:
        return self.left.values


def mod_svd(a, backend: str = "lapack") -> ModSvdResult:
    """Thin SVD via QR of the tall matrix followed by an SVD of R.

    The left factor equals the first n columns of Q * blockdiag(U1, I), i.e.
    Q[:, :n] @ U1 with R = U1 diag(s) V^T; it matches :func:`thin_svd` up to
    column signs (identically after canonicalization when the singular values
    are distinct).  Q is kept as a Householder reflector sequence and never
    materialized.
    """
    _check_backend(backend)
    x = _as_data_matrix(a)
    p, n = x.p, x.n
    if p < n:
        raise ShapeError(f"QR-based SVD expects p >= n, got {p} x {n}")
    if backend == "lapack":
        (qr, tau), r = scipy.linalg.qr(x.values, mode="raw")
        q: QFactor = LapackQ(qr, tau)
        u1, s, _ = np.linalg.svd(r, full_matrices=False)
    else:
        q, r = householder_qr(x.values)
        u1, s = golub_reinsch_svd(r)
    block = u1 if p == n else np.vstack([u1, np.zeros((p - n, n))])
    left = _canonicalize_signs(q.apply(block))
    return ModSvdResult(SpectralForm(left, s, p), q)
