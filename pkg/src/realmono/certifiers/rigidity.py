"""Real-part independence and affine rigidity of real monotone free functions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import expr as ex
from ..errors import DomainError
from ..free import FreeFunctionSpec, evaluate, sample_point
from ..hermitian import as_tuple, ginibre, norm, random_hermitian, re_part, tuple_to_json
from .monotone import certify_monotone
from .report import CertificateReport, TrialResult, run_trials, trial_seed

RE_INDEP_TAG = 19


def re_dependence_margin(F: FreeFunctionSpec, R, W1, W2) -> float:
    """``-||Re F(R + i W1) - Re F(R + i W2)||``, scaled by ``max(1, norms)``.

    Zero means no dependence on the imaginary part was seen at this probe.
    """
    R, W1, W2 = as_tuple(R), as_tuple(W1), as_tuple(W2)
    P = re_part(evaluate(F, R + 1j * W1))
    Q = re_part(evaluate(F, R + 1j * W2))
    return -norm(P - Q) / max(1.0, norm(P), norm(Q))


def induced_hermitian_map(F: FreeFunctionSpec) -> FreeFunctionSpec:
    """``R -> Re F(R)`` on Hermitian positive definite tuples."""
    return FreeFunctionSpec(ex.Re(F.expr), F.arity, "hermitian_PD", f"Re[{F.name}]")


def re_independence_test(F: FreeFunctionSpec, n=(1, 2, 3), trials: int = 200, seed: int = 0, tol: float = 1e-8,
                         probes=(), monotone_trials: int | None = None) -> CertificateReport:
    """Check that ``Re F`` ignores ``Im X`` and is operator monotone in ``Re X``.

    ``probes`` are explicit ``(R, W1, W2)`` triples tested before the seeded
    trials. The induced Hermitian map is then passed to ``certify_monotone``;
    its report sits in ``details["induced_monotone"]``.
    """
    n_list = [n] if isinstance(n, int) else list(n)
    report = CertificateReport("re_independent", F.name, n_list, 0, seed, tol)

    for p, (R, W1, W2) in enumerate(probes):
        m = re_dependence_margin(F, R, W1, W2)
        report.trials += 1
        report.worst_margin = min(report.worst_margin, m)
        report.margins.append((-1 - p, as_tuple(R).shape[1], m))
        if m < -tol and report.witness is None:
            report.witness = {"probe": p, "trial": -1 - p, "dim": as_tuple(R).shape[1], "R": tuple_to_json(R),
                              "W1": tuple_to_json(W1), "W2": tuple_to_json(W2), "margin": m,
                              "part": "imaginary_dependence"}
    if report.witness is not None:
        return report

    def trial(dim, t):
        for attempt in range(100):
            rng = np.random.default_rng(trial_seed(seed, RE_INDEP_TAG, dim, t, attempt))
            R = re_part(sample_point("P_Re", dim, F.arity, rng))
            scale = 10.0 ** rng.uniform(-1, 0.5)
            W1 = scale * np.stack([random_hermitian(rng, dim) for _ in range(F.arity)])
            W2 = scale * np.stack([random_hermitian(rng, dim) for _ in range(F.arity)])
            try:
                m = re_dependence_margin(F, R, W1, W2)
            except DomainError:
                continue
            return TrialResult(m, lambda: {"R": tuple_to_json(R), "W1": tuple_to_json(W1),
                                           "W2": tuple_to_json(W2), "part": "imaginary_dependence"})
        raise DomainError(f"no in-domain probe for {F.name}")

    run_trials(report, trial, trials)
    if report.witness is not None:
        return report

    mono = certify_monotone(induced_hermitian_map(F), n_list, monotone_trials or trials, seed, tol)
    report.details["induced_monotone"] = mono.to_json()
    report.trials += mono.trials
    report.worst_margin = min(report.worst_margin, mono.worst_margin)
    if mono.witness is not None:
        report.witness = dict(mono.witness, part="induced_monotone")
    return report


@dataclass
class AffineFit:
    a0: complex
    a: list
    residual: float
    base: str  # "zero" or "ones": the point the coefficients were read at
    scalar_base: bool  # F(base) is a multiple of the identity at n = 2
    base_defect: float
    dims: list = field(default_factory=lambda: [1, 2, 3])

    @property
    def monotone_form(self) -> bool:
        """Coefficients of the form allowed for real monotone holomorphic F: a_j real, >= 0."""
        return all(abs(c.imag) <= 1e-10 and c.real >= -1e-10 for c in self.a)

    def to_json(self) -> dict:
        return {"a0": [self.a0.real, self.a0.imag], "a": [[c.real, c.imag] for c in self.a],
                "residual": self.residual, "base": self.base, "scalar_base": self.scalar_base,
                "base_defect": self.base_defect, "monotone_form": self.monotone_form,
                "dims": list(self.dims)}


def affine_fit(F: FreeFunctionSpec, k: int | None = None, n_probe: int = 20, seed: int = 0) -> AffineFit:
    """Fit ``a0*I + sum_j a_j X_j`` to F.

    Coefficients come from 1x1 probes: ``a_j = F(base + e_j) - F(base)``
    with base 0 when F is defined there, otherwise base ``(1, ..., 1)``
    (the shift is recorded in ``base``). The residual is the worst of
    ``||F(X) - fit(X)|| / (1 + ||F(X)||)`` over seeded probes at n = 1, 2, 3.
    """
    k = k or F.arity
    base_val = 0.0 if F.domain == "all" else 1.0
    base = np.full((k, 1, 1), base_val, dtype=np.complex128)
    f0 = evaluate(F, base)[0, 0]
    a = []
    for j in range(k):
        probe = base.copy()
        probe[j, 0, 0] += 1.0
        a.append(complex(evaluate(F, probe)[0, 0] - f0))
    a0 = complex(f0 - base_val * sum(a))

    big = evaluate(F, np.stack([base_val * np.eye(2)] * k))
    defect = norm(big - big[0, 0] * np.eye(2)) / max(1.0, abs(big[0, 0]))

    rng = np.random.default_rng([seed, 401])
    worst = 0.0
    dims = [1, 2, 3]
    for i in range(n_probe):
        n = dims[i % 3]
        domain = "P_Re" if F.domain != "all" else "all"
        for _ in range(100):
            X = sample_point(domain, n, k, rng) if domain != "all" else np.stack([ginibre(rng, n) for _ in range(k)])
            try:
                FX = evaluate(F, X)
                break
            except DomainError:
                continue
        fit = a0 * np.eye(n) + sum(c * x for c, x in zip(a, X))
        worst = max(worst, norm(FX - fit) / (1.0 + norm(FX)))
    return AffineFit(a0, a, worst, "zero" if base_val == 0 else "ones", defect <= 1e-8, defect, dims)
