"""Certificate reports and the seeded trial loop shared by all certifiers.

A certificate is sampling-based refutation: ``no_violation_found`` means no
counterexample turned up within the stated budget. It is evidence, never a
proof. Margins are scaled: the smallest eigenvalue of the relevant Hermitian
part divided by ``max(1, norms of the compared sides)``.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..hermitian import norm, re_part, vector_to_json

CLAIMS = ("monotone", "concave", "derivative_cp", "re_independent", "affine", "hypograph_convex")
NO_VIOLATION = "no_violation_found"
VIOLATED = "violated"
HYPOTHESIS_NOT_MET = "hypothesis_not_met"


@dataclass
class CertificateReport:
    claim: str
    spec: str
    dims: list
    trials: int
    seed: int
    tol: float
    worst_margin: float = float("inf")
    witness: dict | None = None
    details: dict = field(default_factory=dict)
    margins: list = field(default_factory=list, repr=False)  # (trial, dim, margin) rows for CSV

    @property
    def outcome(self) -> str:
        return VIOLATED if self.witness is not None else NO_VIOLATION

    @property
    def violated(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        out = {
            "claim": self.claim,
            "spec": self.spec,
            "dims": list(self.dims),
            "trials": self.trials,
            "seed": self.seed,
            "tol": self.tol,
            "outcome": self.outcome,
            "worst_margin": None if not np.isfinite(self.worst_margin) else float(self.worst_margin),
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["trial", "dim", "margin"])
            w.writerows(self.margins)


def scaled_leq(P: np.ndarray, Q: np.ndarray) -> tuple[float, np.ndarray]:
    """Scaled margin of ``P <=_Re Q`` and the eigenvector realising it."""
    D = re_part(Q - P)
    w, v = np.linalg.eigh(D)
    return float(w[0]) / max(1.0, norm(P), norm(Q)), v[:, 0]


def trial_seed(seed: int, tag: int, n: int, trial: int, attempt: int = 0) -> int:
    """Integer seed for one trial, reproducible from the report's seed."""
    return int(np.random.SeedSequence([int(seed), tag, n, trial, attempt]).generate_state(1)[0])


@dataclass
class TrialResult:
    margin: float
    witness: Callable[[], dict] | None = None  # built lazily, only on violation


def run_trials(report: CertificateReport, trial: Callable[[int, int], TrialResult], trials: int,
               stop_on_violation: bool = True, workers: int = 1) -> CertificateReport:
    """Run ``trial(n, t)`` for t < trials with n cycling through ``report.dims``.

    Results are reduced in trial order, so the first violation (lowest trial
    index) is the witness whatever the number of workers.
    """
    dims = list(report.dims)
    batch = max(1, workers) * 4

    def one(t):
        n = dims[t % len(dims)]
        return t, n, trial(n, t)

    t0 = 0
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while t0 < trials:
            idx = range(t0, min(trials, t0 + batch))
            results = list(pool.map(one, idx)) if pool else [one(t) for t in idx]
            for t, n, res in results:
                report.trials += 1
                report.margins.append((t, n, res.margin))
                report.worst_margin = min(report.worst_margin, res.margin)
                if res.margin < -report.tol and report.witness is None:
                    report.witness = res.witness() if res.witness else {"trial": t, "dim": n}
                    report.witness.setdefault("trial", t)
                    report.witness.setdefault("dim", n)
                    report.witness.setdefault("margin", res.margin)
                    if stop_on_violation:
                        return report
            t0 += batch
    finally:
        if pool:
            pool.shutdown()
    return report


def vec_json(v) -> list:
    return vector_to_json(v)
