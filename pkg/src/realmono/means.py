"""Arithmetic, harmonic and geometric means of matrices.

The geometric mean uses ``A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}`` with
principal square roots. For Hermitian positive definite inputs every root is
a PSD root; for accretive (real-positive) inputs the roots are principal
matrix square roots computed through the Schur form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DimensionError, DomainError
from .hermitian import (
    as_matrix,
    is_hermitian,
    matrix_to_json,
    random_pd,
    re_part,
    sample,
    sqrt_psd,
    sqrtm_principal,
)
from .order import OrderVerdict, in_P_re, real_leq


class MeanKind(str, Enum):
    ARITHMETIC = "arithmetic"
    HARMONIC = "harmonic"
    GEOMETRIC = "geometric"


def _inv(X: np.ndarray) -> np.ndarray:
    try:
        Xi = np.linalg.inv(X)
    except np.linalg.LinAlgError:
        raise DomainError("singular matrix") from None
    if not np.all(np.isfinite(Xi)) or np.linalg.norm(X, 1) * np.linalg.norm(Xi, 1) > 1e14:
        raise DomainError("matrix is numerically singular")
    return Xi


def _require_real_pd(*mats: np.ndarray) -> None:
    for M in mats:
        if not in_P_re(M):
            raise DomainError("mean requires a positive definite real part")


def geometric_mean(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    _require_real_pd(A, B)
    if is_hermitian(A) and is_hermitian(B):
        Ah = sqrt_psd(A)
        Aih = _inv(Ah)
        M = Aih @ B @ Aih
        G = Ah @ sqrt_psd((M + M.conj().T) / 2) @ Ah
        return (G + G.conj().T) / 2
    Ah = sqrtm_principal(A)
    Aih = _inv(Ah)
    return Ah @ sqrtm_principal(Aih @ B @ Aih) @ Ah


def harmonic_mean(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    _require_real_pd(A, B)
    return 2 * _inv(_inv(A) + _inv(B))


def arithmetic_mean(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    return (A + B) / 2


_MEANS = {
    MeanKind.ARITHMETIC: arithmetic_mean,
    MeanKind.HARMONIC: harmonic_mean,
    MeanKind.GEOMETRIC: geometric_mean,
}


def mean(kind, A, B) -> np.ndarray:
    return _MEANS[MeanKind(kind)](A, B)


@dataclass
class MaxCharacterizationReport:
    feasibility_margin: float
    probe_margin: float
    eps: float
    tol: float

    @property
    def feasible(self) -> bool:
        return self.feasibility_margin >= -self.tol

    @property
    def maximal(self) -> bool:
        """The eps-inflated candidate is infeasible."""
        return self.probe_margin < 0

    @property
    def passed(self) -> bool:
        return self.feasible and self.maximal

    def to_json(self) -> dict:
        return {"feasible": self.feasible, "feasibility_margin": self.feasibility_margin,
                "maximal": self.maximal, "probe_margin": self.probe_margin,
                "eps": self.eps, "tol": self.tol}


def verify_max_characterization(A, B, G, eps: float = 1e-3, tol: float = 1e-8) -> MaxCharacterizationReport:
    """Probe ``G`` as the largest X with ``[[A, X], [X, B]] >= 0``.

    Feasibility is the smallest eigenvalue of the block matrix; maximality is
    probed by inflating ``G`` to ``G + eps*I``, which must break positivity.
    """
    A, B, G = as_matrix(A), as_matrix(B), as_matrix(G)
    for M in (A, B):
        if not is_hermitian(M) or np.linalg.eigvalsh(re_part(M))[0] <= 0:
            raise DomainError("max characterization needs Hermitian positive definite A and B")
    n = A.shape[0]

    def block_margin(X):
        blk = np.block([[A, X], [X.conj().T, B]])
        return float(np.linalg.eigvalsh((blk + blk.conj().T) / 2)[0])

    return MaxCharacterizationReport(block_margin(G), block_margin(G + eps * np.eye(n)), eps, tol)


@dataclass
class AGHReport:
    harmonic: np.ndarray
    geometric: np.ndarray
    arithmetic: np.ndarray
    harmonic_le_geometric: OrderVerdict
    geometric_le_arithmetic: OrderVerdict
    hermitian_inputs: bool
    extra: dict = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return self.harmonic_le_geometric.holds and self.geometric_le_arithmetic.holds

    @property
    def worst_margin(self) -> float:
        return min(self.harmonic_le_geometric.margin, self.geometric_le_arithmetic.margin)

    def to_json(self) -> dict:
        return {
            "hermitian_inputs": self.hermitian_inputs,
            "harmonic_le_geometric": self.harmonic_le_geometric.to_json(),
            "geometric_le_arithmetic": self.geometric_le_arithmetic.to_json(),
            "means": {"harmonic": matrix_to_json(self.harmonic),
                      "geometric": matrix_to_json(self.geometric),
                      "arithmetic": matrix_to_json(self.arithmetic)},
            **self.extra,
        }


def agh_probe(A, B, tol: float | None = None) -> AGHReport:
    """Check harmonic <=_Re geometric <=_Re arithmetic for one pair."""
    A, B = as_matrix(A), as_matrix(B)
    H = harmonic_mean(A, B)
    G = geometric_mean(A, B)
    M = arithmetic_mean(A, B)
    return AGHReport(H, G, M, real_leq(H, G, tol), real_leq(G, M, tol),
                     is_hermitian(A) and is_hermitian(B))


def agh_counterexample_search(n_list=(1, 2), trials: int = 10_000, seed: int = 0,
                              tol: float | None = None, domain: str = "P_Re") -> tuple[int, AGHReport | None, float]:
    """Search seeded real-positive pairs for an AGH failure.

    ``domain="hermitian_PD"`` draws Hermitian positive definite pairs
    instead, where the inequalities are classical and no failure should
    turn up. Returns ``(trials_run, failing_report_or_None, worst_margin)``; the
    failing report carries its ``trial_seed`` and ``dim`` in ``extra``.
    """
    worst = np.inf
    for t in range(trials):
        n = n_list[t % len(n_list)]
        trial_seed = int(np.random.SeedSequence([int(seed), 31, t]).generate_state(1)[0])
        if domain == "hermitian_PD":
            rng = np.random.default_rng(trial_seed)
            A, B = random_pd(rng, n), random_pd(rng, n)
        else:
            A, B = sample("real_positive", n, 2, trial_seed)
        rep = agh_probe(A, B, tol)
        worst = min(worst, rep.worst_margin)
        if not rep.all_hold:
            rep.extra.update(trial=t, trial_seed=trial_seed, dim=n,
                             A=matrix_to_json(A), B=matrix_to_json(B))
            return t + 1, rep, worst
    return trials, None, worst


__all__ = [
    "MeanKind", "mean", "geometric_mean", "harmonic_mean", "arithmetic_mean",
    "verify_max_characterization", "MaxCharacterizationReport",
]
