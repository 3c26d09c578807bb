"""The real-positive preorder on matrices and operator tuples.

Convention: ``A <=_Re B`` means ``Re(B - A)`` is positive semidefinite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArityError, DimensionError
from .hermitian import (
    ORDER_FLOOR,
    as_matrix,
    as_tuple,
    random_hermitian,
    random_psd_increment,
    re_part,
    sample,
    vector_to_json,
)


@dataclass
class OrderVerdict:
    holds: bool
    margin: float
    witness_vector: np.ndarray | None = None
    index: int = 0  # tuple component that realised the margin
    tol: float = 0.0

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        out = {"holds": bool(self.holds), "margin": float(self.margin)}
        if self.witness_vector is not None:
            out["witness_vector"] = vector_to_json(self.witness_vector)
            out["index"] = int(self.index)
        return out


def _hermitian_verdict(H: np.ndarray, tol: float | None, index: int = 0) -> OrderVerdict:
    H = (H + H.conj().T) / 2
    w, v = np.linalg.eigh(H)
    if tol is None:
        tol = 1e-8 * max(1.0, float(np.max(np.abs(w))))
    margin = float(w[0])
    holds = margin >= -tol
    return OrderVerdict(holds, margin, None if holds else v[:, 0], index, tol)


def is_real_positive(X, tol: float | None = None) -> OrderVerdict:
    """Verdict on ``Re X >= 0``; margin is the smallest eigenvalue of ``Re X``."""
    return _hermitian_verdict(re_part(as_matrix(X)), tol)


def in_P_re(X, tol: float | None = None) -> bool:
    """True iff every item of the tuple has a positive definite real part."""
    for R in re_part(as_tuple(X)):
        w = np.linalg.eigvalsh(R)
        t = 1e-8 * max(1.0, float(np.max(np.abs(w)))) if tol is None else tol
        if not w[0] > t:
            return False
    return True


def real_leq(A, B, tol: float | None = None) -> OrderVerdict:
    """``A <=_Re B`` componentwise; the margin is the minimum over components."""
    A, B = as_tuple(A), as_tuple(B)
    if A.shape[0] != B.shape[0]:
        raise ArityError(f"tuples have different arity ({A.shape[0]} vs {B.shape[0]})")
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    worst = None
    for i, D in enumerate(re_part(B - A)):
        verdict = _hermitian_verdict(D, tol, i)
        if worst is None or verdict.margin < worst.margin:
            worst = verdict
    if not worst.holds:
        return worst
    # every component holds; keep the global minimum but no witness
    return OrderVerdict(True, worst.margin, None, worst.index, worst.tol)


def sample_ordered_pair(n: int, k: int = 1, seed: int = 0, domain: str = "P_Re") -> tuple[np.ndarray, np.ndarray]:
    """Seeded pair of tuples with ``A <=_Re B``.

    For ``domain="P_Re"`` both lie in P_Re and ``B = Re A + P + i W'`` with a
    PSD increment ``P`` (random rank, scale in [1e-3, 1]) and an imaginary part
    ``W'`` drawn independently of ``A``. For ``domain="hermitian_PD"`` the pair
    is Hermitian positive definite.
    """
    if domain == "hermitian_PD":
        A, B = sample("psd_pair_ordered", n, k, seed)
        return A, B
    A = sample("real_positive", n, k, seed)
    rng = np.random.default_rng([int(seed), 7919, n, k])
    B = np.empty_like(A)
    for i in range(k):
        imag_scale = 10.0 ** rng.uniform(-1, 0.5)
        increment = random_psd_increment(rng, n) + ORDER_FLOOR * np.eye(n)
        B[i] = re_part(A[i]) + increment + 1j * imag_scale * random_hermitian(rng, n)
    return A, B
