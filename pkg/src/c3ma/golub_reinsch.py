"""Hand-written Householder QR and Golub-Reinsch bidiagonal SVD.

These are the "reference" factorization kernels: Householder
bidiagonalization of the full tall matrix followed by implicit-shift QR
iterations on the bidiagonal for the one-shot SVD, and Householder QR
followed by the same bidiagonal core on the small triangular factor for the
combined variant.  Right singular vectors are never accumulated because no
caller needs them; every sign fix they would absorb is free.

Each stage exists twice: a plain numpy implementation (always available, and
the ground truth in the unit tests) and a numba-compiled twin working on
transposed layouts so the inner loops run over contiguous memory.  The
compiled twins are used when numba imports; both produce the same rotation
and reflector sequences, so results agree to round-off.

Conventions: matrices are m x n with m >= n; Givens rotations use
G = [[c, s], [-s, c]] chosen so that G @ [f, g]^T = [r, 0]^T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError

_EPS = float(np.finfo(np.float64).eps)
# Relative neighbor criterion for superdiagonal deflation; 30 eps keeps the
# computed singular values well inside the 1e-10 relative contracts.
_DEFLATE_TOL = 30.0 * _EPS


def _householder(x: np.ndarray) -> tuple[np.ndarray, float]:
    """Reflector (v, beta) with v[0] = 1 and (I - beta v v^T) x = ||x|| e_1."""
    v = np.array(x, dtype=float)
    if v.size == 1:
        first = v[0]
        v[0] = 1.0
        return v, (2.0 if first < 0.0 else 0.0)
    sigma = float(v[1:] @ v[1:])
    x0 = float(v[0])
    if sigma == 0.0:
        v[:] = 0.0
        v[0] = 1.0
        return v, (2.0 if x0 < 0.0 else 0.0)
    norm = math.sqrt(x0 * x0 + sigma)
    v0 = x0 - norm if x0 <= 0.0 else -sigma / (x0 + norm)
    beta = 2.0 * v0 * v0 / (sigma + v0 * v0)
    v /= v0
    v[0] = 1.0
    return v, beta


# ---------------------------------------------------------------------------
# numba-compiled kernels (transposed layouts; contiguous inner loops)
# ---------------------------------------------------------------------------


def _make_compiled_kernels():
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is normally present
        return None

    @njit(cache=True)
    def reflect_rows(vt, betas, k, at, row_start):
        """Apply reflector k (rows >= k of the original) to at rows row_start.."""
        n_rows, m = at.shape
        beta = betas[k]
        if beta == 0.0:
            return
        for j in range(row_start, n_rows):
            acc = 0.0
            for i in range(k, m):
                acc += vt[k, i] * at[j, i]
            acc *= beta
            for i in range(k, m):
                at[j, i] -= vt[k, i] * acc

    @njit(cache=True)
    def make_reflector(vt, betas, k, at):
        """Householder vector for at[k, k:] stored into vt[k, k:]."""
        m = at.shape[1]
        sigma = 0.0
        for i in range(k + 1, m):
            sigma += at[k, i] * at[k, i]
        x0 = at[k, k]
        vt[k, k] = 1.0
        if sigma == 0.0:
            for i in range(k + 1, m):
                vt[k, i] = 0.0
            betas[k] = 2.0 if x0 < 0.0 else 0.0
            return
        norm = math.sqrt(x0 * x0 + sigma)
        v0 = x0 - norm if x0 <= 0.0 else -sigma / (x0 + norm)
        inv = 1.0 / v0
        for i in range(k + 1, m):
            vt[k, i] = at[k, i] * inv
        betas[k] = 2.0 * v0 * v0 / (sigma + v0 * v0)

    @njit(cache=True)
    def qr_t(at, vt, betas):
        """Householder QR on the transposed matrix at (n x m), in place."""
        n = at.shape[0]
        for k in range(n):
            make_reflector(vt, betas, k, at)
            reflect_rows(vt, betas, k, at, k)

    @njit(cache=True)
    def bidiag_t(at, vt, betas, d, e):
        """Golub-Kahan bidiagonalization on at (n x m); right reflectors inline."""
        n, m = at.shape
        w = np.empty(n)
        for k in range(n):
            make_reflector(vt, betas, k, at)
            reflect_rows(vt, betas, k, at, k)
            if k < n - 2:
                # Reflector over at[k+1:, k] (a row of the original matrix);
                # copied out first because the update rewrites that column.
                sigma = 0.0
                for j in range(k + 2, n):
                    sigma += at[j, k] * at[j, k]
                x0 = at[k + 1, k]
                if sigma != 0.0:
                    norm = math.sqrt(x0 * x0 + sigma)
                    v0 = x0 - norm if x0 <= 0.0 else -sigma / (x0 + norm)
                    beta2 = 2.0 * v0 * v0 / (sigma + v0 * v0)
                    inv = 1.0 / v0
                    w[k + 1] = 1.0
                    for j in range(k + 2, n):
                        w[j] = at[j, k] * inv
                    for i in range(k, m):
                        acc = 0.0
                        for j in range(k + 1, n):
                            acc += w[j] * at[j, i]
                        acc *= beta2
                        for j in range(k + 1, n):
                            at[j, i] -= w[j] * acc
                elif x0 < 0.0:
                    for i in range(k, m):
                        at[k + 1, i] = -at[k + 1, i]
        for k in range(n):
            d[k] = at[k, k]
        for k in range(n - 1):
            e[k] = at[k + 1, k]

    @njit(cache=True)
    def apply_t(vt, betas, bt, transpose):
        """Q @ B (or Q^T @ B) on the transposed operand bt (w x m)."""
        k_total = vt.shape[0]
        w, m = bt.shape
        if transpose:
            order = range(k_total)
        else:
            order = range(k_total - 1, -1, -1)
        for k in order:
            beta = betas[k]
            if beta == 0.0:
                continue
            for j in range(w):
                acc = 0.0
                for i in range(k, m):
                    acc += vt[k, i] * bt[j, i]
                acc *= beta
                for i in range(k, m):
                    bt[j, i] -= vt[k, i] * acc

    return qr_t, bidiag_t, apply_t


_KERNELS = _make_compiled_kernels()


def _make_compiled_driver():
    """Bidiagonal QR iteration compiled with numba; rotations are the hot path."""
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        return None

    @njit(cache=True)
    def driver(d, e, ut):
        n = d.size
        m = ut.shape[1]
        if n <= 1:
            return 0
        norm = 0.0
        for i in range(n):
            norm = max(norm, abs(d[i]))
        for i in range(n - 1):
            norm = max(norm, abs(e[i]))
        if norm == 0.0:
            return 0
        tiny = _EPS * norm
        sweeps = 0
        max_sweeps = 60 * n
        hi = n - 1
        while hi > 0:
            if abs(e[hi - 1]) <= _DEFLATE_TOL * (abs(d[hi - 1]) + abs(d[hi])):
                e[hi - 1] = 0.0
                hi -= 1
                continue
            lo = hi - 1
            while lo > 0 and abs(e[lo - 1]) > _DEFLATE_TOL * (abs(d[lo - 1]) + abs(d[lo])):
                lo -= 1
            if abs(d[hi]) <= tiny:
                d[hi] = 0.0
                f = e[hi - 1]
                e[hi - 1] = 0.0
                for j in range(hi - 1, lo - 1, -1):
                    dj = d[j]
                    if f == 0.0:
                        c, s, r = 1.0, 0.0, dj
                    elif dj == 0.0:
                        c, s, r = 0.0, 1.0, f
                    else:
                        r = math.hypot(dj, f)
                        c, s = dj / r, f / r
                    d[j] = r
                    if j > lo:
                        f = -s * e[j - 1]
                        e[j - 1] = c * e[j - 1]
                continue
            zero_row = -1
            for k in range(lo, hi):
                if abs(d[k]) <= tiny:
                    zero_row = k
                    break
            if zero_row >= 0:
                d[zero_row] = 0.0
                f = e[zero_row]
                e[zero_row] = 0.0
                for j in range(zero_row + 1, hi + 1):
                    dj = d[j]
                    if f == 0.0:
                        c, s, r = 1.0, 0.0, dj
                    elif dj == 0.0:
                        c, s, r = 0.0, 1.0, f
                    else:
                        r = math.hypot(dj, f)
                        c, s = dj / r, f / r
                    d[j] = r
                    for col in range(m):
                        tj = c * ut[j, col] + s * ut[zero_row, col]
                        ut[zero_row, col] = c * ut[zero_row, col] - s * ut[j, col]
                        ut[j, col] = tj
                    if j < hi:
                        f = -s * e[j]
                        e[j] = c * e[j]
                continue
            # One implicit-shift QR sweep on [lo, hi].
            dm1 = d[hi - 1]
            dn = d[hi]
            em1 = e[hi - 1]
            em2 = e[hi - 2] if hi - 1 > lo else 0.0
            t11 = dm1 * dm1 + em2 * em2
            t22 = dn * dn + em1 * em1
            t12 = dm1 * em1
            delta = 0.5 * (t11 - t22)
            if t12 == 0.0:
                shift = t22
            else:
                base = delta if delta != 0.0 else 1.0
                denom = delta + math.copysign(math.hypot(delta, t12), base)
                shift = t22 - t12 * t12 / denom
            y = d[lo] * d[lo] - shift
            z = d[lo] * e[lo]
            for k in range(lo, hi):
                if z == 0.0:
                    c, s, r = 1.0, 0.0, y
                elif y == 0.0:
                    c, s, r = 0.0, 1.0, z
                else:
                    r = math.hypot(y, z)
                    c, s = y / r, z / r
                if k > lo:
                    e[k - 1] = r
                dk = c * d[k] + s * e[k]
                ek = c * e[k] - s * d[k]
                bulge = s * d[k + 1]
                dk1 = c * d[k + 1]
                if bulge == 0.0:
                    c2, s2, r2 = 1.0, 0.0, dk
                elif dk == 0.0:
                    c2, s2, r2 = 0.0, 1.0, bulge
                else:
                    r2 = math.hypot(dk, bulge)
                    c2, s2 = dk / r2, bulge / r2
                d[k] = r2
                e[k] = c2 * ek + s2 * dk1
                d[k + 1] = c2 * dk1 - s2 * ek
                for col in range(m):
                    tk = c2 * ut[k, col] + s2 * ut[k + 1, col]
                    ut[k + 1, col] = c2 * ut[k + 1, col] - s2 * ut[k, col]
                    ut[k, col] = tk
                if k < hi - 1:
                    y = e[k]
                    z = s2 * e[k + 1]
                    e[k + 1] = c2 * e[k + 1]
            sweeps += 1
            if sweeps > max_sweeps:
                return -1
        return sweeps

    return driver


_COMPILED_DRIVER = _make_compiled_driver()


# ---------------------------------------------------------------------------
# public structures and numpy reference paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HouseholderSequence:
    """Implicit product Q = H_1 H_2 ... H_k of Householder reflectors.

    Reflector j is stored in row j of ``vectors_t`` from column j on, with
    unit leading entry.  Applying Q or Q^T costs O(m k) per column and the
    m x m orthogonal factor is never materialized.
    """

    vectors_t: np.ndarray  # k x m
    betas: np.ndarray  # k

    @property
    def rows(self) -> int:
        return self.vectors_t.shape[1]

    @property
    def vectors(self) -> np.ndarray:
        """Reflectors as columns of an m x k array."""
        return self.vectors_t.T

    def _apply(self, b: np.ndarray, transpose: bool) -> np.ndarray:
        mat = np.asarray(b, dtype=float)
        single = mat.ndim == 1
        if single:
            mat = mat.reshape(-1, 1)
        if mat.shape[0] != self.rows:
            raise ShapeError(
                f"operand has {mat.shape[0]} rows, reflectors act on {self.rows}"
            )
        if _KERNELS is not None:
            bt = np.ascontiguousarray(mat.T)
            _KERNELS[2](self.vectors_t, self.betas, bt, transpose)
            out = np.ascontiguousarray(bt.T)
        else:
            out = mat.copy()
            k = self.betas.size
            order = range(k) if transpose else range(k - 1, -1, -1)
            for j in order:
                beta = self.betas[j]
                if beta == 0.0:
                    continue
                v = self.vectors_t[j, j:]
                out[j:, :] -= np.outer(v, beta * (v @ out[j:, :]))
        return out[:, 0] if single else out

    def apply(self, b: np.ndarray) -> np.ndarray:
        """Return Q @ b without forming Q."""
        return self._apply(b, transpose=False)

    def apply_transpose(self, b: np.ndarray) -> np.ndarray:
        """Return Q^T @ b without forming Q."""
        return self._apply(b, transpose=True)


def _check_tall(a: np.ndarray) -> tuple[int, int]:
    if a.ndim != 2:
        raise ShapeError("need a 2-d array")
    m, n = a.shape
    if m < n:
        raise ShapeError(f"need rows >= columns, got {m} x {n}")
    return m, n


def householder_qr(a: np.ndarray) -> tuple[HouseholderSequence, np.ndarray]:
    """QR factorization of a tall matrix; Q stays a reflector sequence."""
    a = np.asarray(a, dtype=float)
    m, n = _check_tall(a)
    if _KERNELS is not None:
        at = np.ascontiguousarray(a.T)
        vt = np.zeros((n, m))
        betas = np.zeros(n)
        _KERNELS[0](at, vt, betas)
        return HouseholderSequence(vt, betas), np.triu(at.T[:n, :n])
    r = a.copy()
    vt = np.zeros((n, m))
    betas = np.zeros(n)
    for k in range(n):
        v, beta = _householder(r[k:, k])
        vt[k, k:] = v
        betas[k] = beta
        if beta != 0.0:
            r[k:, k:] -= np.outer(v, beta * (v @ r[k:, k:]))
    return HouseholderSequence(vt, betas), np.triu(r[:n, :n])


def _bidiagonalize_python(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Plain numpy bidiagonalization; returns (d, e, vt, betas)."""
    work = np.array(a, dtype=float)
    m, n = work.shape
    vt = np.zeros((n, m))
    betas = np.zeros(n)
    for k in range(n):
        v, beta = _householder(work[k:, k])
        vt[k, k:] = v
        betas[k] = beta
        if beta != 0.0:
            work[k:, k:] -= np.outer(v, beta * (v @ work[k:, k:]))
        if k < n - 2:
            w, beta2 = _householder(work[k, k + 1 :])
            if beta2 != 0.0:
                work[k:, k + 1 :] -= np.outer(beta2 * (work[k:, k + 1 :] @ w), w)
    d = np.diagonal(work).copy()
    e = np.diagonal(work, offset=1)[: n - 1].copy() if n > 1 else np.zeros(0)
    return d, e, vt, betas


def _bidiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduce a to upper bidiagonal form B, accumulating the thin left factor.

    Returns (d, e, U) with d the diagonal (length n), e the superdiagonal
    (length n-1) and U the m x n product of the left reflectors applied to
    the leading identity block, so a = U B V^T for an orthogonal V that is
    dropped.
    """
    a = np.asarray(a, dtype=float)
    m, n = a.shape
    if _KERNELS is not None:
        at = np.ascontiguousarray(a.T)
        vt = np.zeros((n, m))
        betas = np.zeros(n)
        d = np.zeros(n)
        e = np.zeros(max(n - 1, 0))
        _KERNELS[1](at, vt, betas, d, e)
        ut = np.ascontiguousarray(np.eye(m, n).T)
        _KERNELS[2](vt, betas, ut, False)
        return d, e, np.ascontiguousarray(ut.T)
    d, e, vt, betas = _bidiagonalize_python(a)
    u = np.eye(m, n)
    for k in range(n - 1, -1, -1):
        beta = betas[k]
        if beta != 0.0:
            v = vt[k, k:]
            u[k:, :] -= np.outer(v, beta * (v @ u[k:, :]))
    return d, e, u


def _givens(f: float, g: float) -> tuple[float, float, float]:
    if g == 0.0:
        return 1.0, 0.0, f
    if f == 0.0:
        return 0.0, 1.0, g
    r = math.hypot(f, g)
    return f / r, g / r, r


def _rotate_rows(ut: np.ndarray, i: int, j: int, c: float, s: float) -> None:
    """Accumulate a left rotation on plane (i, j) into U stored transposed."""
    ti = c * ut[i] + s * ut[j]
    ut[j] *= c
    ut[j] -= s * ut[i]
    ut[i] = ti


def _kill_superdiagonal_above(d: np.ndarray, e: np.ndarray, lo: int, hi: int) -> None:
    """d[hi] is zero: chase e[hi-1] away with right rotations (V-side only)."""
    f = e[hi - 1]
    e[hi - 1] = 0.0
    for j in range(hi - 1, lo - 1, -1):
        c, s, r = _givens(d[j], f)
        d[j] = r
        if j > lo:
            f = -s * e[j - 1]
            e[j - 1] = c * e[j - 1]


def _kill_row(d: np.ndarray, e: np.ndarray, ut: np.ndarray, k: int, hi: int) -> None:
    """d[k] is zero with e[k] != 0: rotate row k against rows k+1..hi."""
    f = e[k]
    e[k] = 0.0
    for j in range(k + 1, hi + 1):
        c, s, r = _givens(d[j], f)
        d[j] = r
        _rotate_rows(ut, j, k, c, s)
        if j < hi:
            f = -s * e[j]
            e[j] = c * e[j]


def _gk_sweep(d: np.ndarray, e: np.ndarray, ut: np.ndarray, lo: int, hi: int) -> None:
    """One implicit-shift QR sweep on the window [lo, hi] of B."""
    # Wilkinson shift: eigenvalue of the trailing 2x2 of B^T B closest to its
    # last diagonal entry.
    dm1 = d[hi - 1]
    dn = d[hi]
    em1 = e[hi - 1]
    em2 = e[hi - 2] if hi - 1 > lo else 0.0
    t11 = dm1 * dm1 + em2 * em2
    t22 = dn * dn + em1 * em1
    t12 = dm1 * em1
    delta = 0.5 * (t11 - t22)
    if t12 == 0.0:
        shift = t22
    else:
        denom = delta + math.copysign(math.hypot(delta, t12), delta if delta != 0.0 else 1.0)
        shift = t22 - t12 * t12 / denom

    y = d[lo] * d[lo] - shift
    z = d[lo] * e[lo]
    for k in range(lo, hi):
        c, s, r = _givens(y, z)
        if k > lo:
            e[k - 1] = r
        # Right rotation on columns (k, k+1); bulge appears at (k+1, k).
        dk = c * d[k] + s * e[k]
        ek = c * e[k] - s * d[k]
        bulge = s * d[k + 1]
        dk1 = c * d[k + 1]
        # Left rotation on rows (k, k+1) annihilates the bulge.
        c2, s2, r2 = _givens(dk, bulge)
        d[k] = r2
        e[k] = c2 * ek + s2 * dk1
        d[k + 1] = c2 * dk1 - s2 * ek
        _rotate_rows(ut, k, k + 1, c2, s2)
        if k < hi - 1:
            y = e[k]
            z = s2 * e[k + 1]
            e[k + 1] = c2 * e[k + 1]


def _svd_bidiagonal_python(d: np.ndarray, e: np.ndarray, ut: np.ndarray) -> None:
    """Drive d, e to diagonal form in place, accumulating into ut."""
    n = d.size
    if n <= 1:
        return
    norm = max(float(np.abs(d).max()), float(np.abs(e).max()) if e.size else 0.0)
    if norm == 0.0:
        return
    tiny = _EPS * norm

    def negligible(i: int) -> bool:
        return abs(e[i]) <= _DEFLATE_TOL * (abs(d[i]) + abs(d[i + 1]))

    sweeps = 0
    max_sweeps = 60 * n
    hi = n - 1
    while hi > 0:
        if negligible(hi - 1):
            e[hi - 1] = 0.0
            hi -= 1
            continue
        lo = hi - 1
        while lo > 0 and not negligible(lo - 1):
            lo -= 1
        # Window [lo, hi] has no negligible superdiagonal entries inside.
        if abs(d[hi]) <= tiny:
            d[hi] = 0.0
            _kill_superdiagonal_above(d, e, lo, hi)
            continue
        zero_row = next((k for k in range(lo, hi) if abs(d[k]) <= tiny), None)
        if zero_row is not None:
            d[zero_row] = 0.0
            _kill_row(d, e, ut, zero_row, hi)
            continue
        _gk_sweep(d, e, ut, lo, hi)
        sweeps += 1
        if sweeps > max_sweeps:
            raise ArithmeticError("bidiagonal SVD failed to converge")


def _svd_bidiagonal(d: np.ndarray, e: np.ndarray, ut: np.ndarray) -> None:
    if _COMPILED_DRIVER is None:
        _svd_bidiagonal_python(d, e, ut)
        return
    status = _COMPILED_DRIVER(d, e if e.size else np.zeros(0), ut)
    if status < 0:
        raise ArithmeticError("bidiagonal SVD failed to converge")


def golub_reinsch_svd(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Thin SVD of a tall matrix: left factor and singular values only.

    Returns (U, s) with U of shape (m, n) having orthonormal columns and s
    descending and nonnegative, such that a = U diag(s) V^T for some
    orthogonal V.  Signs absorbed by the dropped V make s >= 0 free.
    """
    mat = np.asarray(a, dtype=float)
    _check_tall(mat)
    d, e, u = _bidiagonalize(mat)
    ut = np.ascontiguousarray(u.T)
    _svd_bidiagonal(d, e, ut)
    s = np.abs(d)
    order = np.argsort(-s, kind="stable")
    return np.ascontiguousarray(ut[order].T), s[order]
