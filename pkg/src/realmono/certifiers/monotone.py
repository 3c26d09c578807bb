"""Sampled certification of real monotonicity and real concavity."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError, SamplingError
from ..free import MAX_RESAMPLE, FreeFunctionSpec, evaluate, sample_point
from ..hermitian import tuple_to_json
from ..order import sample_ordered_pair
from .report import CertificateReport, TrialResult, run_trials, scaled_leq, trial_seed, vec_json

MONOTONE_TAG = 11
CONCAVE_TAG = 13
DEFAULT_LAMBDAS = (0.25, 0.5, 0.75)


def _pair_domain(domain: str) -> str:
    return "hermitian_PD" if domain == "hermitian_PD" else "P_Re"


def monotone_margin(F: FreeFunctionSpec, A, B) -> tuple[float, np.ndarray]:
    """Scaled margin of ``F(A) <=_Re F(B)``; the caller supplies ``A <=_Re B``."""
    return scaled_leq(evaluate(F, A), evaluate(F, B))


def concave_margin(F: FreeFunctionSpec, A, B, lam: float) -> tuple[float, np.ndarray]:
    """Scaled margin of ``(1-lam) F(A) + lam F(B) <=_Re F((1-lam) A + lam B)``."""
    A, B = np.asarray(A, dtype=complex), np.asarray(B, dtype=complex)
    lhs = (1 - lam) * evaluate(F, A) + lam * evaluate(F, B)
    return scaled_leq(lhs, evaluate(F, (1 - lam) * A + lam * B))


def draw_ordered_pair(F: FreeFunctionSpec, n: int, seed: int, t: int, domain: str):
    """Seeded in-domain ordered pair for trial ``t``; returns (A, B, seed_used)."""
    for attempt in range(MAX_RESAMPLE):
        s = trial_seed(seed, MONOTONE_TAG, n, t, attempt)
        A, B = sample_ordered_pair(n, F.arity, s, domain=_pair_domain(domain))
        try:
            evaluate(F, A)
            evaluate(F, B)
        except DomainError:
            continue
        return A, B, s
    raise SamplingError(f"no in-domain ordered pair for {F.name} at n={n}")


def minimize_monotone_witness(F: FreeFunctionSpec, A, B, tol: float, steps: int = 40) -> dict:
    """Bisect along ``B_t = A + t (B - A)`` for the smallest violating step.

    ``t = 0`` gives equality (margin 0); ``t = 1`` is the reported violation.
    """
    lo, hi = 0.0, 1.0
    m_hi, _ = monotone_margin(F, A, B)
    for _ in range(steps):
        mid = (lo + hi) / 2
        m, _ = monotone_margin(F, A, A + mid * (B - A))
        if m < -tol:
            hi, m_hi = mid, m
        else:
            lo = mid
    return {"t": hi, "B": tuple_to_json(A + hi * (B - A)), "margin": m_hi}


def certify_monotone(F: FreeFunctionSpec, n_list=(1, 2, 3), trials: int = 1000, seed: int = 0,
                     tol: float = 1e-8, domain: str | None = None, stop_on_violation: bool = True,
                     minimize: bool = True, workers: int = 1) -> CertificateReport:
    """Search seeded ordered pairs ``A <=_Re B`` for ``F(A) <=_Re F(B)`` failures.

    The witness carries ``trial_seed``: ``sample_ordered_pair(dim, arity,
    trial_seed)`` reproduces the offending pair.
    """
    domain = domain or F.domain
    report = CertificateReport("monotone", F.name, list(n_list), 0, seed, tol)

    def trial(n, t):
        A, B, s = draw_ordered_pair(F, n, seed, t, domain)
        m, v = monotone_margin(F, A, B)

        def witness():
            w = {"trial_seed": s, "A": tuple_to_json(A), "B": tuple_to_json(B),
                 "F(A)": tuple_to_json(evaluate(F, A)), "F(B)": tuple_to_json(evaluate(F, B)),
                 "witness_vector": vec_json(v)}
            if minimize:
                w["minimized"] = minimize_monotone_witness(F, A, B, tol)
            return w

        return TrialResult(m, witness)

    return run_trials(report, trial, trials, stop_on_violation, workers)


def replay_monotone_witness(F: FreeFunctionSpec, witness: dict, domain: str | None = None) -> float:
    """Recompute the margin of a reported monotonicity witness from its seed."""
    A, B = sample_ordered_pair(witness["dim"], F.arity, witness["trial_seed"],
                               domain=_pair_domain(domain or F.domain))
    return monotone_margin(F, A, B)[0]


def certify_concave(F: FreeFunctionSpec, n_list=(1, 2, 3), trials: int = 1000, seed: int = 0,
                    tol: float = 1e-8, lambdas=DEFAULT_LAMBDAS, domain: str | None = None,
                    stop_on_violation: bool = True, workers: int = 1) -> CertificateReport:
    """Search seeded pairs and weights for a real concavity failure."""
    domain = domain or F.domain
    report = CertificateReport("concave", F.name, list(n_list), 0, seed, tol,
                               details={"lambdas": list(lambdas)})

    def trial(n, t):
        for attempt in range(MAX_RESAMPLE):
            rng = np.random.default_rng(trial_seed(seed, CONCAVE_TAG, n, t, attempt))
            A = sample_point(domain, n, F.arity, rng)
            B = sample_point(domain, n, F.arity, rng)
            try:
                results = [(concave_margin(F, A, B, lam), lam) for lam in lambdas]
            except DomainError:
                continue
            (m, v), lam = min(results, key=lambda r: r[0][0])
            return TrialResult(m, lambda: {"A": tuple_to_json(A), "B": tuple_to_json(B), "lambda": lam,
                                           "witness_vector": vec_json(v)})
        raise SamplingError(f"no in-domain pair for {F.name} at n={n}")

    return run_trials(report, trial, trials, stop_on_violation, workers)
