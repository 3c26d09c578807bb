"""The acceptance suite: ten property-based criteria at fixed seeds and budgets.

Each ``criterion_*`` function runs one criterion at its stated tolerance and
returns a ``CriterionResult``; ``run_all`` runs them in order. Nothing here
is tuned to pass: budgets and tolerances are the published ones.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import zoo
from .certifiers import (
    analyse_map,
    affine_fit,
    block_concavity_construction,
    certify_concave,
    certify_monotone,
    derivative_criterion,
    integral_reconstruction,
    kraus_map,
    re_dependence_margin,
    re_independence_test,
    replay_monotone_witness,
    transpose_map,
)
from .free import check_free_axioms, sample_point
from .hermitian import ginibre, random_pd
from .hypograph import check_matrix_convexity
from .means import geometric_mean, verify_max_characterization
from .order import real_leq, sample_ordered_pair
from .pluriharmonic import BANK, LINEAR_BANK, holomorphy_residual, linearity_test, polydisc_points

SEED = 20240601


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    data: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed, "detail": self.detail,
                "data": self.data}


def criterion_free_axioms(seed: int = SEED) -> CriterionResult:
    worst, fails = 0.0, []
    for name, e in zoo.ZOO.items():
        for n in (1, 2, 3):
            for rep in check_free_axioms(e.spec, n, trials=100, seed=seed, threshold=1e-9):
                worst = max(worst, rep.max_residual)
                if not rep.passed:
                    fails.append(f"{name}/{rep.property}/n={n}")
    return CriterionResult(1, "free axioms", not fails,
                           f"{len(zoo.ZOO)} members, worst residual {worst:.2e} (<= 1e-9)",
                           {"worst_residual": worst, "failures": fails})


def criterion_geomean_max(seed: int = SEED) -> CriterionResult:
    rng = np.random.default_rng([seed, 2])
    worst_feas, worst_probe, bad = np.inf, -np.inf, 0
    for t in range(100):
        n = 1 + t % 4
        A, B = random_pd(rng, n), random_pd(rng, n)
        rep = verify_max_characterization(A, B, geometric_mean(A, B), eps=1e-3, tol=1e-8)
        worst_feas = min(worst_feas, rep.feasibility_margin)
        worst_probe = max(worst_probe, rep.probe_margin)
        bad += not rep.passed
    return CriterionResult(2, "geometric mean max characterization", bad == 0,
                           f"100 pairs, worst feasibility {worst_feas:.2e} (>= -1e-8), "
                           f"largest inflated eigenvalue {worst_probe:.2e} (< 0)",
                           {"failures": bad})


def criterion_geomean_order_failure(seed: int = SEED) -> CriterionResult:
    F = zoo.spec("geomean")
    rep = certify_monotone(F, (1, 2), trials=10_000, seed=seed)
    w = rep.witness
    ok = w is not None and w["margin"] < -1e-6
    replay_equal = False
    if ok:
        A, B = sample_ordered_pair(w["dim"], F.arity, w["trial_seed"])
        ordered = real_leq(A, B).holds
        replay_equal = replay_monotone_witness(F, w) == w["margin"]
        ok = ordered and replay_equal
    detail = (f"witness at trial {w['trial']} (n={w['dim']}), margin {w['margin']:.3e} (< -1e-6), "
              f"replay identical: {replay_equal}") if w else f"no violation in {rep.trials} trials"
    return CriterionResult(3, "geometric mean breaks the real order", ok, detail,
                           {"report": rep.to_json() if w else None})


def criterion_re_independence(seed: int = SEED) -> CriterionResult:
    m = re_dependence_margin(zoo.spec("neg-inverse"), [[[1]]], [[[0]]], [[[1]]])
    probe = re_independence_test(zoo.spec("neg-inverse"), 1, trials=10, seed=seed,
                                 probes=[([[[1]]], [[[0]]], [[[1]]])])
    refuted = probe.violated and abs(probe.witness["margin"] + 0.5) <= 1e-10
    good = re_independence_test(zoo.spec("neg-re-inverse"), (1, 2, 3, 4), trials=1000, seed=seed)
    ok = abs(m + 0.5) <= 1e-10 and refuted and not good.violated
    return CriterionResult(4, "real-part independence detector", ok,
                           f"-X^-1 margin {m:.12f} (-0.5 +- 1e-10); -(Re X)^-1 {good.outcome} over 1000 "
                           f"independence trials (+{good.details['induced_monotone']['trials']} induced-monotone)")


def criterion_rigidity(seed: int = SEED) -> CriterionResult:
    rng = np.random.default_rng([seed, 5])
    worst = 0.0
    for k in (1, 2, 3):
        a0 = complex(rng.normal(), rng.normal())
        a = rng.uniform(0, 3, size=k)
        fit = affine_fit(zoo.affine(a0, a, "all", f"planted-{k}"), seed=seed)
        worst = max(worst, abs(fit.a0 - a0), *(abs(x - y) for x, y in zip(fit.a, a)))
    sq = zoo.spec("square")
    res = affine_fit(sq, seed=seed).residual
    mono = certify_monotone(sq, (1, 2, 3), trials=10_000, seed=seed)
    ok = worst <= 1e-8 and res > 1e-2 and mono.violated
    return CriterionResult(5, "affine rigidity", ok,
                           f"planted coefficient error {worst:.2e} (<= 1e-8); X^2 residual {res:.3f} (> 1e-2), "
                           f"monotone witness at trial {mono.witness['trial'] if mono.witness else None}")


def criterion_monotone_concave(seed: int = SEED, trials: int = 100) -> CriterionResult:
    bad = []
    for name, e in zoo.ZOO.items():
        for n in (1, 2, 3, 4):
            mono = certify_monotone(e.spec, [2 * n], trials=trials, seed=seed, minimize=False)
            if mono.violated:
                continue
            conc = certify_concave(e.spec, [n], trials=trials, seed=seed)
            if conc.violated:
                bad.append(f"{name}/n={n}")
    rng = np.random.default_rng([seed, 6])
    worst_u = worst_c = 0.0
    worst_dom = np.inf
    for t in range(100):
        n, k = 1 + t % 3, 1 + t % 2
        A, B = sample_point("P_Re", n, k, rng), sample_point("P_Re", n, k, rng)
        rep = block_concavity_construction(A, B, rng.uniform(0.05, 0.95), 10.0 ** rng.uniform(-2, 0))
        worst_u = max(worst_u, rep.unitary_residual)
        worst_c = max(worst_c, rep.conjugation_residual)
        worst_dom = min(worst_dom, rep.domination_margin)
    ok = not bad and worst_u <= 1e-10 and worst_c <= 1e-10 and worst_dom >= -1e-10
    return CriterionResult(6, "monotone at 2n implies concave at n", ok,
                           f"{len(bad)} chain breaks; block residuals {worst_u:.1e}/{worst_c:.1e} (<= 1e-10), "
                           f"worst domination margin {worst_dom:.2e}", {"breaks": bad})


SMOOTH = ("identity", "affine-pos", "affine-neg", "affine-complex", "square", "cube", "neg-inverse", "inverse",
          "neg-re-inverse", "sqrt-re", "geomean-hpd", "cor-sqrt", "cor-neg-inv")


def criterion_derivative(seed: int = SEED) -> CriterionResult:
    disagree = []
    for name, e in zoo.ZOO.items():
        mono = certify_monotone(e.spec, (1, 2), trials=400, seed=seed, minimize=False)
        der = derivative_criterion(e.spec, trials=200, seed=seed)
        if mono.violated != der.violated:
            disagree.append(name)
    rng = np.random.default_rng([seed, 7])
    worst = 0.0
    for name in SMOOTH:
        F = zoo.spec(name)
        A = sample_point(F.domain if F.domain != "all" else "P_Re", 2, F.arity, rng)
        B = sample_point(F.domain if F.domain != "all" else "P_Re", 2, F.arity, rng)
        worst = max(worst, integral_reconstruction(F, A, B)[0])
    ok = not disagree and worst <= 1e-6
    return CriterionResult(7, "derivative criterion", ok,
                           f"{len(disagree)} disagreements with certify_monotone; worst integral "
                           f"reconstruction error {worst:.2e} (<= 1e-6)", {"disagreements": disagree})


def criterion_choi(seed: int = SEED) -> CriterionResult:
    t = analyse_map(transpose_map, 2, "transpose")
    rng = np.random.default_rng([seed, 8])
    worst, cp = 0.0, True
    for trial in range(10):
        n, p, r = 2 + trial % 2, 1 + trial % 3, 1 + trial % 3
        K = [ginibre(rng, p, n) for _ in range(r)]
        rep = analyse_map(kraus_map(K), n, "kraus", seed)
        cp &= rep.verdict.holds
        worst = max(worst, rep.reconstruction_residual if rep.reconstruction_residual is not None else np.inf)
    ok = (not t.verdict.holds) and abs(t.verdict.margin + 1) <= 1e-10 and cp and worst <= 1e-9
    return CriterionResult(8, "Choi test", ok,
                           f"transpose min eigenvalue {t.verdict.margin:.12f} (-1 +- 1e-10); "
                           f"10 Kraus maps CP, worst reconstruction {worst:.1e} (<= 1e-9)")


def criterion_hypograph(seed: int = SEED) -> CriterionResult:
    disagree, checked = [], []
    for name, e in zoo.ZOO.items():
        if not e.into_p_re:
            continue
        checked.append(name)
        h = check_matrix_convexity(e.spec, (1, 2, 3), trials=300, seed=seed)
        m = certify_monotone(e.spec, (1, 2, 3), trials=300, seed=seed, minimize=False)
        if h.violated != m.violated:
            disagree.append(name)
    return CriterionResult(9, "hypograph convexity vs monotonicity", not disagree,
                           f"{len(checked)} members into P_Re, {len(disagree)} disagreements",
                           {"checked": checked, "disagreements": disagree})


def criterion_pluriharmonic(seed: int = SEED) -> CriterionResult:
    worst = 0.0
    for f in BANK.values():
        if f.cls == "holomorphic":
            worst = max(worst, holomorphy_residual(f, polydisc_points(f, 100, seed)))
    linear_ok = all(linearity_test(BANK[n], seed=seed).linear for n in LINEAR_BANK)
    rejected = True
    for n in ("exp-1", "z^2"):
        rep = linearity_test(BANK[n], seed=seed)
        rejected &= (not rep.linear) and rep.im_independent is False
    ok = worst <= 1e-6 and linear_ok and rejected
    return CriterionResult(10, "pluriharmonic lab", ok,
                           f"dbar residual {worst:.1e} (<= 1e-6); linear fields accepted: {linear_ok}; "
                           f"exp(z)-1 and z^2 rejected at the Im-dependence stage: {rejected}")


CRITERIA = (criterion_free_axioms, criterion_geomean_max, criterion_geomean_order_failure,
            criterion_re_independence, criterion_rigidity, criterion_monotone_concave, criterion_derivative,
            criterion_choi, criterion_hypograph, criterion_pluriharmonic)


def run_criterion(number: int, seed: int = SEED) -> CriterionResult:
    t0 = time.perf_counter()
    res = CRITERIA[number - 1](seed)
    res.seconds = time.perf_counter() - t0
    return res


def run_all(seed: int = SEED, only=None) -> list[CriterionResult]:
    return [run_criterion(i, seed) for i in (only or range(1, len(CRITERIA) + 1))]
