"""Real hypographs of free functions and sampled tests of their matrix convexity.

The real hypograph of F collects the pairs ``(Y, X)`` with ``X`` in the
domain and ``Y <=_Re F(X)``, graded by dimension. It is matrix convex exactly
when F is real concave, so a violation of any sub-test below refutes real
concavity (and, for F mapping into P_Re, real monotonicity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .certifiers.report import CertificateReport, TrialResult, run_trials, scaled_leq, trial_seed, vec_json
from .errors import DimensionError, DomainError, SamplingError
from .free import MAX_RESAMPLE, FreeFunctionSpec, evaluate, sample_point
from .hermitian import (
    as_matrix,
    as_tuple,
    block_diag,
    direct_sum,
    ginibre,
    matrix_to_json,
    norm,
    random_hermitian,
    random_psd_increment,
    random_unitary,
    tuple_to_json,
)
from .order import OrderVerdict, real_leq

HYPOGRAPH_TAG = 29
SUBTESTS = ("convex", "direct_sum", "isometry", "reducing", "contraction")
MAX_DIM = 8


@dataclass
class GradedPoint:
    Y: np.ndarray
    X: np.ndarray  # (k, n, n)

    def __post_init__(self):
        self.Y = as_matrix(self.Y)
        self.X = as_tuple(self.X)
        if self.Y.shape != self.X.shape[1:]:
            raise DimensionError(f"Y is {self.Y.shape}, X items are {self.X.shape[1:]}")

    @property
    def dim(self) -> int:
        return self.Y.shape[0]

    def compress(self, V) -> GradedPoint:
        """``(V^* Y V, V^* X V)`` for an n x m matrix V."""
        V = np.asarray(V, dtype=np.complex128)
        Vh = V.conj().T
        return GradedPoint(Vh @ self.Y @ V, np.stack([Vh @ x @ V for x in self.X]))

    def to_json(self) -> dict:
        return {"Y": matrix_to_json(self.Y), "X": tuple_to_json(self.X)}


def direct_sum_points(p: GradedPoint, q: GradedPoint) -> GradedPoint:
    return GradedPoint(block_diag(p.Y, q.Y), direct_sum(p.X, q.X))


def hypo_member(F: FreeFunctionSpec, p: GradedPoint, tol: float | None = None) -> OrderVerdict:
    """``Y <=_Re F(X)``; the margin is unscaled."""
    return real_leq(p.Y, evaluate(F, p.X), tol)


def hypo_margin(F: FreeFunctionSpec, p: GradedPoint) -> tuple[float, np.ndarray]:
    """Scaled membership margin, as used by the certifiers."""
    return scaled_leq(p.Y, evaluate(F, p.X))


def sat_member(candidates, X, tol: float | None = None) -> bool:
    """True iff some candidate Y has ``X <=_Re Y``."""
    X = as_matrix(X)
    for Y in candidates:
        Y = as_matrix(Y)
        if Y.shape != X.shape:
            raise DimensionError(f"candidate {Y.shape} vs point {X.shape}")
        if real_leq(X, Y, tol).holds:
            return True
    return False


def random_real_positive_gap(rng: np.random.Generator, n: int) -> np.ndarray:
    """``P`` with ``Re P >= 0``: zero a third of the time, else a PSD part plus an imaginary part."""
    if rng.uniform() < 1 / 3:
        return np.zeros((n, n), dtype=np.complex128)
    return random_psd_increment(rng, n) + 1j * 10.0 ** rng.uniform(-2, 0) * random_hermitian(rng, n)


def random_member(F: FreeFunctionSpec, n: int, rng: np.random.Generator) -> GradedPoint:
    """``(F(X) - P, X)``, a member by construction."""
    for _ in range(MAX_RESAMPLE):
        X = sample_point(F.domain, n, F.arity, rng)
        try:
            FX = evaluate(F, X)
        except DomainError:
            continue
        return GradedPoint(FX - random_real_positive_gap(rng, n), X)
    raise SamplingError(f"no in-domain hypograph point for {F.name} at n={n}")


def random_contraction(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """An n x m matrix of norm at most 1."""
    V = ginibre(rng, n, m)
    return V * (rng.uniform(0.2, 1.0) / max(norm(V), 1e-300))


def contraction_applicable(F: FreeFunctionSpec, tol: float = 1e-12) -> bool:
    """Closure under contractions needs ``(0, 0)`` in the hypograph at level 1."""
    if F.domain != "all":
        return False
    f0 = evaluate(F, np.zeros((F.arity, 1, 1)))
    return bool(f0[0, 0].real >= -tol)


def check_matrix_convexity(F: FreeFunctionSpec, n_list=(1, 2, 3), trials: int = 300, seed: int = 0,
                           tol: float = 1e-8, lambdas=(0.25, 0.5, 0.75), stop_on_violation: bool = True,
                           workers: int = 1) -> CertificateReport:
    """Sampled matrix-convexity test of the real hypograph.

    Every trial draws members at dimension n and runs the sub-tests
    ``convex`` (scalar combinations), ``direct_sum``, ``isometry``
    (compression from n+1 down to n), ``reducing`` (blocks of a unitarily
    rotated direct sum) and, when ``(0, 0)`` is a member at level 1,
    ``contraction``. The trial margin is the worst sub-test margin and the
    witness names the failing sub-test.
    """
    n_list = list(n_list)
    if max(n_list) + 1 > MAX_DIM:
        raise DimensionError(f"hypograph tests run up to dimension {MAX_DIM}")
    use_contraction = contraction_applicable(F)
    active = [s for s in SUBTESTS if s != "contraction" or use_contraction]
    report = CertificateReport("hypograph_convex", F.name, n_list, 0, seed, tol,
                               details={"subtests": active, "subtest_worst": {s: None for s in active},
                                        "dimension_coverage": sorted({d for n in n_list for d in (n, n + 1, 2 * n)})})

    def trial(n, t):
        rng = np.random.default_rng(trial_seed(seed, HYPOGRAPH_TAG, n, t))
        p, q = random_member(F, n, rng), random_member(F, n, rng)
        results = {}

        lam = lambdas[t % len(lambdas)]
        comb = GradedPoint((1 - lam) * p.Y + lam * q.Y, (1 - lam) * p.X + lam * q.X)
        results["convex"] = (comb, hypo_margin(F, comb), {"lambda": lam})

        s = direct_sum_points(p, q)
        results["direct_sum"] = (s, hypo_margin(F, s), {})

        big = random_member(F, n + 1, rng)
        U = random_unitary(rng, n + 1)[:, :n]
        c = big.compress(U)
        results["isometry"] = (c, hypo_margin(F, c), {"from_dim": n + 1})

        W = random_unitary(rng, 2 * n)
        rotated = s.compress(W)
        block = rotated.compress(W.conj().T[:, :n])
        results["reducing"] = (block, hypo_margin(F, block), {"from_dim": 2 * n})

        if use_contraction:
            V = random_contraction(rng, n + 1, n)
            cc = big.compress(V)
            results["contraction"] = (cc, hypo_margin(F, cc), {"from_dim": n + 1})

        tag = min(results, key=lambda k: results[k][1][0])
        point, (m, v), extra = results[tag]
        margins = {k: r[1][0] for k, r in results.items()}

        def witness():
            return dict({"subtest": tag, "point": point.to_json(), "witness_vector": vec_json(v),
                         "subtest_margins": margins}, **extra)

        per_trial[t] = margins
        return TrialResult(m, witness)

    per_trial: dict = {}
    run_trials(report, trial, trials, stop_on_violation, workers)
    sub = report.details["subtest_worst"]
    for t, _, _ in report.margins:
        for k, m in per_trial[t].items():
            sub[k] = m if sub[k] is None else min(sub[k], m)
    return report


def concavity_to_hypograph_witness(F: FreeFunctionSpec, A, B, lam: float) -> tuple[GradedPoint, OrderVerdict]:
    """Turn a concavity witness into a non-member of the hypograph.

    ``(F(A), A)`` and ``(F(B), B)`` are members; their combination with
    weight ``lam`` on B is a member iff the concavity inequality holds there.
    """
    A, B = as_tuple(A), as_tuple(B)
    point = GradedPoint((1 - lam) * evaluate(F, A) + lam * evaluate(F, B), (1 - lam) * A + lam * B)
    return point, hypo_member(F, point, 0.0)


__all__ = [
    "GradedPoint", "MAX_DIM", "SUBTESTS", "check_matrix_convexity", "concavity_to_hypograph_witness",
    "contraction_applicable", "direct_sum_points", "hypo_margin", "hypo_member", "random_contraction",
    "random_member", "sat_member",
]
