"""The 2x2 unitary dilation behind monotone => concave, and the continuity probe."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, ParameterError
from ..free import FreeFunctionSpec, evaluate
from ..hermitian import as_tuple, ginibre, min_eig, norm, random_hermitian, re_part
from .monotone import concave_margin
from .report import HYPOTHESIS_NOT_MET, NO_VIOLATION, VIOLATED, trial_seed

LIPSCHITZ_TAG = 23


def block_unitary(n: int, lam: float) -> np.ndarray:
    """``[[sqrt(lam) I, -sqrt(1-lam) I], [sqrt(1-lam) I, sqrt(lam) I]]``."""
    a, b = np.sqrt(lam), np.sqrt(1.0 - lam)
    I = np.eye(n)
    return np.block([[a * I, -b * I], [b * I, a * I]]).astype(np.complex128)


@dataclass
class BlockReport:
    lam: float
    eps: float
    unitary_residual: float
    conjugation_residual: float
    domination_margin: float  # min over components of lambda_min Re(diag(...) - V*(A+B)V)
    tol: float

    @property
    def passed(self) -> bool:
        return (self.unitary_residual <= 1e-12 and self.conjugation_residual <= 1e-10
                and self.domination_margin >= -self.tol)

    def to_json(self) -> dict:
        return {"lambda": self.lam, "eps": self.eps, "unitary_residual": self.unitary_residual,
                "conjugation_residual": self.conjugation_residual,
                "domination_margin": self.domination_margin, "passed": self.passed}


def block_concavity_construction(A, B, lam: float, eps: float, tol: float = 1e-10) -> BlockReport:
    """Check the three facts the dilation argument rests on, componentwise.

    1. V is unitary.
    2. ``V^*(A (+) B) V`` equals the block form with diagonal
       ``lam A + (1-lam) B``, ``(1-lam) A + lam B`` and off-diagonal
       ``sqrt(lam (1-lam)) (B - A)``.
    3. With ``D = -sqrt(lam (1-lam)) (Re B - Re A)`` and
       ``Z = D^2/eps + (1-lam) Re A + lam Re B``, the conjugated pair is
       dominated by ``diag(lam A + (1-lam) B + eps I, 2Z)`` in the real order.
    """
    if not 0.0 < lam < 1.0:
        raise ParameterError(f"lambda must lie in (0, 1), got {lam}")
    if not eps > 0.0:
        raise ParameterError(f"eps must be positive, got {eps}")
    A, B = as_tuple(A), as_tuple(B)
    if A.shape != B.shape:
        raise ParameterError(f"shape mismatch {A.shape} vs {B.shape}")
    n = A.shape[1]
    V = block_unitary(n, lam)
    Vh = V.conj().T
    I = np.eye(n)
    unitary_res = norm(Vh @ V - np.eye(2 * n))
    s = np.sqrt(lam * (1.0 - lam))

    conj_res, dom = 0.0, np.inf
    for a, b in zip(A, B):
        Z2 = np.zeros((n, n))
        C = Vh @ np.block([[a, Z2], [Z2, b]]) @ V
        expected = np.block([[lam * a + (1 - lam) * b, s * (b - a)],
                             [s * (b - a), (1 - lam) * a + lam * b]])
        conj_res = max(conj_res, norm(C - expected) / max(1.0, norm(expected)))

        D = -s * (re_part(b) - re_part(a))
        Z = D @ D / eps + (1 - lam) * re_part(a) + lam * re_part(b)
        upper = np.block([[lam * a + (1 - lam) * b + eps * I, Z2], [Z2, 2 * Z]])
        dom = min(dom, min_eig(re_part(upper - C))[0])
    return BlockReport(lam, eps, float(unitary_res), float(conj_res), float(dom), tol)


@dataclass
class LipschitzReport:
    spec: str
    r: float
    trials: int
    seed: int
    outcome: str
    M: float = float("nan")
    ratio: float = float("nan")
    bound: float = float("nan")
    hypothesis_met: bool = False
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def f(x):
            return None if not np.isfinite(x) else float(x)

        return {"claim": "lipschitz", "spec": self.spec, "r": self.r, "trials": self.trials,
                "seed": self.seed, "outcome": self.outcome, "M": f(self.M), "ratio": f(self.ratio),
                "bound": f(self.bound), "hypothesis_met": self.hypothesis_met, "details": self.details}


def _ball_point(center, radius, rng, hermitian, aligned):
    """A point of the closed ``radius``-ball (max-over-items spectral norm)."""
    k, n = center.shape[0], center.shape[1]
    if aligned:
        E = random_hermitian(rng, n) if hermitian else ginibre(rng, n)
        dirs = np.stack([E] * k)
    else:
        dirs = np.stack([random_hermitian(rng, n) if hermitian else ginibre(rng, n) for _ in range(k)])
    dirs = dirs / max(norm(dirs), 1e-300)
    return center + radius * rng.uniform() * dirs


def lipschitz_probe(F: FreeFunctionSpec, center, r: float, trials: int = 200, seed: int = 0, tol: float = 1e-8,
                    hermitian_directions: bool | None = None, aligned: bool = False,
                    concavity_trials: int | None = None) -> LipschitzReport:
    """Estimate the Lipschitz ratio of Re F on the r-ball against ``2M/r``.

    The 2r-ball around ``center`` must lie in F's domain. Real concavity on
    that ball is checked first; if it fails the bound is not asserted and
    the outcome is ``hypothesis_not_met``. ``aligned`` moves every item
    along the same direction, which makes the ratio of an affine F exactly
    ``|sum_j a_j|`` for Hermitian directions.
    """
    if r <= 0:
        raise ParameterError(f"radius must be positive, got {r}")
    C = as_tuple(center)
    if hermitian_directions is None:
        hermitian_directions = F.domain == "hermitian_PD"
    if F.domain != "all":
        slack = min(min_eig(re_part(c))[0] for c in C) - 2 * r
        if slack <= 0:
            raise ParameterError(f"2r-ball around the center leaves {F.domain} (slack {slack:.3e})")
        if F.domain == "hermitian_PD" and (not hermitian_directions or np.max(np.abs(C - re_part(C))) > 0):
            raise ParameterError("hermitian_PD domain needs a Hermitian center and Hermitian directions")
    rep = LipschitzReport(F.name, r, trials, seed, NO_VIOLATION)

    ct = concavity_trials or trials
    worst_concave = np.inf
    for t in range(ct):
        rng = np.random.default_rng(trial_seed(seed, LIPSCHITZ_TAG, C.shape[1], t, 1))
        A = _ball_point(C, 2 * r, rng, hermitian_directions, False)
        B = _ball_point(C, 2 * r, rng, hermitian_directions, False)
        try:
            for lam in (0.25, 0.5, 0.75):
                worst_concave = min(worst_concave, concave_margin(F, A, B, lam)[0])
        except DomainError as exc:
            raise ParameterError(f"domain exit inside the 2r-ball: {exc}") from None
    rep.details["concavity_worst_margin"] = float(worst_concave)
    rep.hypothesis_met = bool(worst_concave >= -tol)
    if not rep.hypothesis_met:
        rep.outcome = HYPOTHESIS_NOT_MET
        return rep

    M = norm(re_part(evaluate(F, C)))
    ratio = 0.0
    for t in range(trials):
        rng = np.random.default_rng(trial_seed(seed, LIPSCHITZ_TAG, C.shape[1], t, 0))
        M = max(M, norm(re_part(evaluate(F, _ball_point(C, 2 * r, rng, hermitian_directions, False)))))
        X = _ball_point(C, r, rng, hermitian_directions, aligned)
        Y = _ball_point(C, r, rng, hermitian_directions, aligned)
        d = norm(Y - X)
        if d < 1e-12:
            continue
        ratio = max(ratio, norm(re_part(evaluate(F, Y) - evaluate(F, X))) / d)
    rep.M, rep.ratio, rep.bound = float(M), float(ratio), float(2 * M / r)
    if ratio > rep.bound + tol:
        rep.outcome = VIOLATED
    return rep
