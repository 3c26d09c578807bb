"""Choi matrices, complete positivity and Kraus factors of linear maps on M_n."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ContractError
from ..hermitian import ginibre, hermitian_defect, norm
from ..order import OrderVerdict

LinearMap = Callable[[np.ndarray], np.ndarray]


@dataclass
class ChoiMatrix:
    n: int
    matrix: np.ndarray  # sum_ij E_ij (x) L(E_ij), shape (n*p, n*p)
    out_dim: int
    description: str = ""

    @property
    def hermitian(self) -> bool:
        return hermitian_defect(self.matrix) <= 1e-10 * (1.0 + norm(self.matrix))


def matrix_unit(n: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((n, n), dtype=np.complex128)
    E[i, j] = 1.0
    return E


def linearity_residual(L: LinearMap, n: int, seed: int = 0, samples: int = 4) -> float:
    """Worst relative residual of ``L(aX + bY) = a L(X) + b L(Y)`` over complex a, b."""
    rng = np.random.default_rng([seed, 307, n])
    worst = 0.0
    for _ in range(samples):
        X, Y = ginibre(rng, n), ginibre(rng, n)
        a, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        lhs = np.asarray(L(a * X + b * Y))
        rhs = a * np.asarray(L(X)) + b * np.asarray(L(Y))
        worst = max(worst, norm(lhs - rhs) / (1.0 + norm(rhs)))
    return worst


def choi_of_linear_map(L: LinearMap, n: int, description: str = "", check_linearity: bool = True,
                       seed: int = 0) -> ChoiMatrix:
    if check_linearity:
        r = linearity_residual(L, n, seed)
        if r > 1e-10:
            raise ContractError(f"map is not complex-linear (residual {r:.3e})")
    blocks = [[np.asarray(L(matrix_unit(n, i, j)), dtype=np.complex128) for j in range(n)] for i in range(n)]
    p = blocks[0][0].shape[0]
    C = np.zeros((n * p, n * p), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            C += np.kron(matrix_unit(n, i, j), blocks[i][j])
    return ChoiMatrix(n, C, p, description)


def is_cp(C: ChoiMatrix, tol: float | None = None) -> OrderVerdict:
    """CP iff the Choi matrix is PSD. A non-Hermitian Choi matrix never qualifies."""
    M = C.matrix
    H = (M + M.conj().T) / 2
    w, v = np.linalg.eigh(H)
    if tol is None:
        tol = 1e-8 * max(1.0, float(np.max(np.abs(w))))
    margin = float(w[0])
    holds = bool(margin >= -tol and C.hermitian)
    return OrderVerdict(holds, margin, None if holds else v[:, 0], 0, tol)


def kraus_operators(C: ChoiMatrix, tol: float = 1e-12) -> list[np.ndarray]:
    """Kraus factors ``K_i`` with ``L(X) = sum_i K_i X K_i^*`` from the spectral decomposition."""
    H = (C.matrix + C.matrix.conj().T) / 2
    w, v = np.linalg.eigh(H)
    cut = tol * max(1.0, float(np.max(np.abs(w))))
    return [np.sqrt(lam) * v[:, i].reshape(C.n, C.out_dim).T for i, lam in enumerate(w) if lam > cut]


def apply_kraus(kraus, X) -> np.ndarray:
    return sum(K @ X @ K.conj().T for K in kraus)


def kraus_reconstruction_residual(L: LinearMap, kraus, n: int, seed: int = 0, samples: int = 8) -> float:
    rng = np.random.default_rng([seed, 311, n])
    worst = 0.0
    for _ in range(samples):
        X = ginibre(rng, n)
        target = np.asarray(L(X))
        worst = max(worst, norm(apply_kraus(kraus, X) - target) / (1.0 + norm(target)))
    return worst


def amplified(L: LinearMap, n: int, m: int) -> LinearMap:
    """``id_m (x) L`` acting blockwise on m x m block matrices with n x n blocks."""

    def Lm(Z):
        Z = np.asarray(Z)
        rows = [[np.asarray(L(Z[i * n:(i + 1) * n, j * n:(j + 1) * n])) for j in range(m)] for i in range(m)]
        return np.block(rows)

    return Lm


def amplified_min_eig(L: LinearMap, n: int, m: int, samples: int = 50, seed: int = 0,
                      real_positive: bool = False) -> float:
    """Smallest eigenvalue of ``Re (id_m (x) L)(Z)`` over sampled inputs Z.

    Inputs are PSD (half of them rank one); with ``real_positive`` they also
    get an arbitrary Hermitian imaginary part, which tests real complete
    positivity of real-linear maps.
    """
    rng = np.random.default_rng([seed, 313, n, m])
    d = n * m
    worst = np.inf
    for s in range(samples):
        if s % 2 == 0:
            v = ginibre(rng, d, 1)
            Z = v @ v.conj().T
        else:
            W = ginibre(rng, d)
            Z = W @ W.conj().T / d
        if real_positive:
            G = ginibre(rng, d)
            Z = Z + 1j * (G + G.conj().T) / 2
        out = amplified(L, n, m)(Z)
        worst = min(worst, float(np.linalg.eigvalsh((out + out.conj().T) / 2)[0]))
    return worst


# -- named maps ------------------------------------------------------------------


def identity_map(X):
    return np.array(X, dtype=np.complex128)


def transpose_map(X):
    return np.array(X, dtype=np.complex128).T


def conjugation_map(V) -> LinearMap:
    """``X -> V^* X V``."""
    V = np.asarray(V, dtype=np.complex128)
    return lambda X: V.conj().T @ X @ V


def kraus_map(kraus) -> LinearMap:
    return lambda X: apply_kraus(kraus, X)


@dataclass
class ChoiReport:
    description: str
    n: int
    verdict: OrderVerdict
    eigenvalues: np.ndarray
    kraus_count: int = 0
    reconstruction_residual: float | None = None

    def to_json(self) -> dict:
        out = {"map": self.description, "n": self.n, "cp": self.verdict.holds,
               "min_eigenvalue": self.verdict.margin,
               "eigenvalues": [float(x) for x in self.eigenvalues]}
        if self.reconstruction_residual is not None:
            out["kraus_count"] = self.kraus_count
            out["reconstruction_residual"] = self.reconstruction_residual
        return out


def analyse_map(L: LinearMap, n: int, description: str = "", seed: int = 0) -> ChoiReport:
    """Choi test plus, when CP, Kraus extraction and reconstruction check."""
    C = choi_of_linear_map(L, n, description, seed=seed)
    verdict = is_cp(C)
    w = np.linalg.eigvalsh((C.matrix + C.matrix.conj().T) / 2)
    rep = ChoiReport(description, n, verdict, w)
    if verdict.holds:
        K = kraus_operators(C)
        rep.kraus_count = len(K)
        rep.reconstruction_residual = kraus_reconstruction_residual(L, K, n, seed)
    return rep
