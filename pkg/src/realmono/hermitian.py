"""Dense complex matrix kernels.

Matrices are ``numpy`` complex arrays of shape ``(n, n)``; operator tuples
``(X_1, ..., X_k)`` are arrays of shape ``(k, n, n)``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from . import _backend
from .errors import ArityError, ConfigurationError, DimensionError, DomainError, HermitianityError

# relative Hermitian defect allowed before a matrix is rejected
HERMITIAN_RTOL = 1e-12
# floor on the real part of sampled real-positive matrices
REAL_POSITIVE_DELTA = 0.1
# definite floor added to ordered increments so round-off cannot make B - A indefinite
ORDER_FLOOR = 1e-12

SAMPLE_KINDS = ("hermitian", "unitary", "isometry", "real_positive", "psd_pair_ordered")


def as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim == 0:
        X = X.reshape(1, 1)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DomainError("matrix has non-finite entries")
    return X


def as_tuple(X) -> np.ndarray:
    """Coerce a matrix, a list of matrices or a ``(k, n, n)`` array to a tuple array."""
    if isinstance(X, (list, tuple)):
        items = [as_matrix(x) for x in X]
        if not items:
            raise ArityError("operator tuple must have k >= 1")
        if len({x.shape for x in items}) != 1:
            raise DimensionError("tuple items have different dimensions")
        return np.stack(items)
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim <= 2:
        return as_matrix(X)[None]
    if X.ndim != 3 or X.shape[1] != X.shape[2]:
        raise DimensionError(f"expected shape (k, n, n), got {X.shape}")
    if X.shape[0] < 1:
        raise ArityError("operator tuple must have k >= 1")
    return X


def adjoint(X: np.ndarray) -> np.ndarray:
    return np.swapaxes(X, -1, -2).conj()


def re_part(X) -> np.ndarray:
    """Hermitian part ``(X + X*) / 2``. Works on single matrices and tuples."""
    X = _square(X)
    return (X + adjoint(X)) / 2


def im_part(X) -> np.ndarray:
    """``(X - X*) / 2i``, so that ``X == re_part(X) + 1j * im_part(X)``."""
    X = _square(X)
    return (X - adjoint(X)) / 2j


def _square(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim == 0:
        return X.reshape(1, 1)
    if X.ndim < 2 or X.shape[-1] != X.shape[-2]:
        raise DimensionError(f"expected square matrices, got shape {X.shape}")
    return X


def norm(X) -> float:
    """Spectral norm; for a tuple, the largest spectral norm over its items."""
    X = np.asarray(X)
    if X.ndim == 2:
        return float(np.linalg.norm(X, 2)) if X.size else 0.0
    return max(norm(x) for x in X)


def default_tol(H) -> float:
    return 1e-8 * max(1.0, norm(H))


def hermitian_defect(X) -> float:
    return float(_backend.hermitian_defect(np.ascontiguousarray(X, dtype=np.complex128)))


def is_hermitian(X, rtol: float = HERMITIAN_RTOL) -> bool:
    X = as_matrix(X)
    return hermitian_defect(X) <= rtol * (1.0 + norm(X))


def check_hermitian(H) -> np.ndarray:
    """Validate and symmetrize a Hermitian matrix."""
    H = as_matrix(H)
    defect = hermitian_defect(H)
    if defect > HERMITIAN_RTOL * (1.0 + norm(H)):
        raise HermitianityError(f"matrix is not Hermitian (defect {defect:.3e})")
    return (H + H.conj().T) / 2


def min_eig(H) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue of a Hermitian matrix and a unit eigenvector for it."""
    H = check_hermitian(H)
    w, v = np.linalg.eigh(H)
    return float(w[0]), v[:, 0]


def is_psd(H, tol: float | None = None) -> tuple[bool, float]:
    """Return ``(margin >= -tol, margin)`` where margin is the smallest eigenvalue."""
    H = check_hermitian(H)
    w = np.linalg.eigvalsh(H)
    if tol is None:
        tol = 1e-8 * max(1.0, float(np.max(np.abs(w))))
    margin = float(w[0])
    return margin >= -tol, margin


def sqrt_psd(H, tol: float | None = None) -> np.ndarray:
    """Principal (PSD) square root of a PSD Hermitian matrix, by spectral decomposition."""
    H = check_hermitian(H)
    if tol is None:
        tol = default_tol(H)
    w, v = np.linalg.eigh(H)
    if w[0] < -tol:
        raise DomainError(f"matrix has a negative eigenvalue {w[0]:.3e}")
    R = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return (R + R.conj().T) / 2


def sqrtm_principal(X) -> np.ndarray:
    """Principal square root of a matrix whose spectrum avoids (-inf, 0].

    Complex Schur form followed by the triangular recurrence kernel.
    """
    X = as_matrix(X)
    n = X.shape[0]
    if n == 1:
        z = X[0, 0]
        if z.imag == 0 and z.real <= 0:
            raise DomainError("no principal square root: eigenvalue on (-inf, 0]")
        return np.sqrt(X)
    T, Z = scipy.linalg.schur(X, output="complex")
    ev = np.diagonal(T)
    scale = max(1.0, float(np.max(np.abs(ev))))
    if np.any((np.abs(ev.imag) <= 1e-14 * scale) & (ev.real <= 0)):
        raise DomainError("no principal square root: eigenvalue on (-inf, 0]")
    try:
        R = _backend.sqrtm_triu(np.ascontiguousarray(T))
    except ZeroDivisionError as exc:
        raise DomainError(str(exc)) from None
    return Z @ R @ Z.conj().T


def direct_sum(A, B) -> np.ndarray:
    """Componentwise block-diagonal stacking of two operator tuples."""
    A, B = as_tuple(A), as_tuple(B)
    if A.shape[0] != B.shape[0]:
        raise ArityError(f"tuples have different arity ({A.shape[0]} vs {B.shape[0]})")
    k, na, nb = A.shape[0], A.shape[1], B.shape[1]
    out = np.zeros((k, na + nb, na + nb), dtype=np.complex128)
    out[:, :na, :na] = A
    out[:, na:, na:] = B
    return out


def block_diag(*mats) -> np.ndarray:
    return scipy.linalg.block_diag(*[np.asarray(m, dtype=np.complex128) for m in mats])


# -- sampling -----------------------------------------------------------------


def ginibre(rng: np.random.Generator, rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    G = ginibre(rng, n)
    return (G + G.conj().T) / 2


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(ginibre(rng, n))
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_pd(rng: np.random.Generator, n: int, delta: float = REAL_POSITIVE_DELTA) -> np.ndarray:
    W = ginibre(rng, n)
    P = W.conj().T @ W / n + delta * np.eye(n)
    return (P + P.conj().T) / 2


def random_real_positive(rng: np.random.Generator, n: int, delta: float = REAL_POSITIVE_DELTA) -> np.ndarray:
    return random_pd(rng, n, delta) + 1j * random_hermitian(rng, n)


def random_psd_increment(rng: np.random.Generator, n: int) -> np.ndarray:
    """PSD matrix of random rank and log-uniform scale in [1e-3, 1]."""
    rank = int(rng.integers(1, n + 1))
    V = ginibre(rng, n, rank)
    P = V @ V.conj().T / max(rank, 1)
    P *= 10.0 ** rng.uniform(-3, 0)
    return (P + P.conj().T) / 2


def _rng(kind: str, n: int, k: int, seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), SAMPLE_KINDS.index(kind), n, k])


def sample(kind: str, n: int, k: int = 1, seed: int = 0, m: int | None = None) -> np.ndarray:
    """Seeded random operator tuples.

    ``isometry`` returns shape ``(k, n, m)`` with ``m <= n`` (default ``n - 1``,
    at least 1). ``psd_pair_ordered`` returns shape ``(2, k, n, n)`` holding
    Hermitian PD tuples ``(A, B)`` with ``B - A`` PSD. All other kinds return
    ``(k, n, n)``.
    """
    if kind not in SAMPLE_KINDS:
        raise ConfigurationError(f"unknown sample kind {kind!r}; expected one of {SAMPLE_KINDS}")
    if n < 1 or k < 1:
        raise ConfigurationError("n and k must be >= 1")
    rng = _rng(kind, n, k, seed)
    if kind == "hermitian":
        return np.stack([random_hermitian(rng, n) for _ in range(k)])
    if kind == "unitary":
        return np.stack([random_unitary(rng, n) for _ in range(k)])
    if kind == "isometry":
        m = max(1, n - 1) if m is None else m
        if not 1 <= m <= n:
            raise ConfigurationError(f"isometry needs 1 <= m <= n, got m={m}, n={n}")
        return np.stack([random_unitary(rng, n)[:, :m] for _ in range(k)])
    if kind == "real_positive":
        return np.stack([random_real_positive(rng, n) for _ in range(k)])
    A = np.stack([random_pd(rng, n) for _ in range(k)])
    B = A + np.stack([random_psd_increment(rng, n) + ORDER_FLOOR * np.eye(n) for _ in range(k)])
    return np.stack([A, B])


# -- JSON ---------------------------------------------------------------------


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2:
        raise DimensionError("matrix_to_json expects a 2-D array")
    flat = M.reshape(-1)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "data": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    data = np.asarray(obj["data"], dtype=float)
    if data.shape != (rows * cols, 2):
        raise DimensionError(f"matrix JSON has {data.shape[0]} entries, expected {rows * cols}")
    return (data[:, 0] + 1j * data[:, 1]).reshape(rows, cols)


def tuple_to_json(X) -> list:
    X = np.asarray(X)
    if X.ndim == 2:
        X = X[None]
    return [matrix_to_json(x) for x in X]


def tuple_from_json(items: list) -> np.ndarray:
    return np.stack([matrix_from_json(o) for o in items])


def vector_to_json(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=np.complex128).reshape(-1)]
