"""Free functions given by expression trees, evaluable at every dimension."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg

from . import expr as ex
from .errors import ArityError, ContractError, DomainError, SamplingError, SpecError
from .hermitian import (
    adjoint,
    as_tuple,
    direct_sum,
    ginibre,
    im_part,
    is_hermitian,
    norm,
    random_hermitian,
    random_pd,
    random_real_positive,
    random_unitary,
    re_part,
    sqrt_psd,
    sqrtm_principal,
    tuple_to_json,
)
from .means import _inv, geometric_mean
from .order import in_P_re

DOMAINS = ("all", "P_Re", "hermitian_PD")
MAX_RESAMPLE = 100


@dataclass(frozen=True)
class FreeFunctionSpec:
    expr: ex.Expr
    arity: int
    domain: str = "P_Re"
    name: str = "anonymous"

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise SpecError(f"unknown domain {self.domain!r}; expected one of {DOMAINS}")
        if self.arity < 1:
            raise SpecError("arity must be >= 1")
        used = ex.max_var(self.expr)
        if used > self.arity:
            raise SpecError(f"expression uses X_{used} but arity is {self.arity}")
        for node in ex.walk(self.expr):
            if not isinstance(node, ex.Expr):
                raise SpecError(f"invalid node {node!r}")

    def __call__(self, X) -> np.ndarray:
        return evaluate(self, X)

    def to_json(self) -> dict:
        return {"name": self.name, "arity": self.arity, "domain": self.domain, "expr": ex.to_json(self.expr)}

    @classmethod
    def from_json(cls, obj: dict) -> FreeFunctionSpec:
        try:
            return cls(ex.from_json(obj["expr"]), int(obj["arity"]), obj.get("domain", "P_Re"),
                       obj.get("name", "anonymous"))
        except KeyError as exc:
            raise SpecError(f"spec is missing field {exc}") from None

    @classmethod
    def load(cls, path) -> FreeFunctionSpec:
        return cls.from_json(json.loads(Path(path).read_text()))


def in_domain(domain: str, X) -> bool:
    X = as_tuple(X)
    if domain == "all":
        return True
    if domain == "P_Re":
        return in_P_re(X)
    return all(is_hermitian(x) for x in X) and all(np.linalg.eigvalsh(re_part(x))[0] > 0 for x in X)


def evaluate(F: FreeFunctionSpec, X, check_domain: bool = True) -> np.ndarray:
    X = as_tuple(X)
    if X.shape[0] != F.arity:
        raise ArityError(f"{F.name} takes {F.arity} variables, got {X.shape[0]}")
    if check_domain and not in_domain(F.domain, X):
        raise DomainError(f"point outside the {F.domain} domain of {F.name}")
    return _eval(F.expr, X, X.shape[1])


def _eval(e: ex.Expr, X: np.ndarray, n: int) -> np.ndarray:
    if isinstance(e, ex.Var):
        return X[e.index - 1]
    if isinstance(e, ex.Const):
        return e.value * np.eye(n, dtype=np.complex128)
    if isinstance(e, ex.Add):
        out = _eval(e.args[0], X, n)
        for a in e.args[1:]:
            out = out + _eval(a, X, n)
        return out
    if isinstance(e, ex.Mul):
        scalar = 1.0 + 0j
        out = None
        for a in e.args:
            if isinstance(a, ex.Const):
                scalar *= a.value
                continue
            v = _eval(a, X, n)
            out = v if out is None else out @ v
        if out is None:
            return scalar * np.eye(n, dtype=np.complex128)
        return out if scalar == 1 else scalar * out
    if isinstance(e, ex.Pow):
        return np.linalg.matrix_power(_eval(e.arg, X, n), e.exponent)
    if isinstance(e, ex.Inv):
        return _inv(_eval(e.arg, X, n))
    if isinstance(e, ex.Sqrt):
        v = _eval(e.arg, X, n)
        return sqrt_psd(v) if is_hermitian(v) else sqrtm_principal(v)
    if isinstance(e, ex.Re):
        return re_part(_eval(e.arg, X, n))
    if isinstance(e, ex.Im):
        return im_part(_eval(e.arg, X, n))
    if isinstance(e, ex.Adj):
        return adjoint(_eval(e.arg, X, n))
    if isinstance(e, ex.Exp):
        return scipy.linalg.expm(_eval(e.arg, X, n))
    if isinstance(e, ex.GeoMean):
        return geometric_mean(_eval(e.left, X, n), _eval(e.right, X, n))
    raise SpecError(f"cannot evaluate node {e!r}")


# -- sampling in a domain -----------------------------------------------------


def sample_point(domain: str, n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    if domain == "P_Re":
        return np.stack([random_real_positive(rng, n) for _ in range(k)])
    if domain == "hermitian_PD":
        return np.stack([random_pd(rng, n) for _ in range(k)])
    return np.stack([ginibre(rng, n) for _ in range(k)])


def trial_rng(seed: int, tag: int, n: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), tag, n, trial])


def _retry(fn, what: str):
    for attempt in range(MAX_RESAMPLE):
        try:
            return fn(attempt)
        except DomainError:
            continue
    raise SamplingError(f"{what}: no in-domain sample after {MAX_RESAMPLE} attempts")


def rel_residual(X, Y) -> float:
    return norm(X - Y) / max(1.0, norm(Y))


# -- invariance checks ----------------------------------------------------------


@dataclass
class InvarianceReport:
    property: str
    trials: int
    max_residual: float
    threshold: float
    spec: str = ""
    dim: int = 0
    seed: int = 0
    skipped: int = 0
    witness: dict | None = None
    residuals: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.trials > 0 and self.max_residual <= self.threshold

    @property
    def outcome(self) -> str:
        return "no_violation_found" if self.passed else "violated"

    def to_json(self) -> dict:
        out = {"property": self.property, "trials": self.trials, "skipped": self.skipped,
               "max_residual": self.max_residual, "threshold": self.threshold,
               "passed": self.passed, "dim": self.dim}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def check_free_axioms(F: FreeFunctionSpec, n: int, trials: int = 100, seed: int = 0,
                      threshold: float = 1e-9) -> tuple[InvarianceReport, InvarianceReport]:
    """Direct-sum and unitary-invariance residuals over seeded samples."""
    ds = InvarianceReport("direct_sum", 0, 0.0, threshold, F.name, n, seed)
    un = InvarianceReport("unitary", 0, 0.0, threshold, F.name, n, seed)
    for t in range(trials):
        rng = trial_rng(seed, 101, n, t)

        def draw(_attempt):
            A = sample_point(F.domain, n, F.arity, rng)
            m = int(rng.integers(1, n + 1))
            B = sample_point(F.domain, m, F.arity, rng)
            return A, B, evaluate(F, A), evaluate(F, B)

        A, B, FA, FB = _retry(draw, f"free axioms for {F.name}")
        U = random_unitary(rng, n)

        lhs = evaluate(F, direct_sum(A, B))
        rhs = direct_sum(FA, FB)[0]
        r = rel_residual(lhs, rhs)
        ds.trials += 1
        ds.residuals.append(r)
        if r > ds.max_residual:
            ds.max_residual = r
            if r > threshold:
                ds.witness = {"trial": t, "A": tuple_to_json(A), "B": tuple_to_json(B), "residual": r}

        UA = np.stack([U.conj().T @ a @ U for a in A])
        r = rel_residual(evaluate(F, UA), U.conj().T @ FA @ U)
        un.trials += 1
        un.residuals.append(r)
        if r > un.max_residual:
            un.max_residual = r
            if r > threshold:
                un.witness = {"trial": t, "A": tuple_to_json(A), "U": tuple_to_json(U), "residual": r}
    return ds, un


def random_similarity(rng: np.random.Generator, n: int, max_cond: float = 10.0, shrink: float = 1.0) -> np.ndarray:
    """Invertible S with condition number <= max_cond (smaller for shrink < 1)."""
    logs = rng.uniform(0.0, np.log(max_cond) * shrink, size=n)
    return random_unitary(rng, n) @ np.diag(np.exp(logs)) @ random_unitary(rng, n)


def check_similarity_invariance(F: FreeFunctionSpec, n: int, trials: int = 100, seed: int = 0,
                                threshold: float = 1e-8) -> InvarianceReport:
    """Residual of ``F(S^-1 A S) = S^-1 F(A) S`` for seeded S with cond(S) <= 10.

    When the conjugated point leaves the domain, S is redrawn closer to a
    unitary; trials where no in-domain S is found count as skipped.
    """
    rep = InvarianceReport("similarity", 0, 0.0, threshold, F.name, n, seed)
    for t in range(trials):
        rng = trial_rng(seed, 103, n, t)
        A = _retry(lambda _a: _checked(F, sample_point(F.domain, n, F.arity, rng)), "similarity base point")
        FA = evaluate(F, A)
        for attempt in range(MAX_RESAMPLE):
            S = random_similarity(rng, n, shrink=0.95 ** attempt)
            Si = np.linalg.inv(S)
            SA = np.stack([Si @ a @ S for a in A])
            try:
                lhs = evaluate(F, SA)
            except DomainError:
                continue
            r = rel_residual(lhs, Si @ FA @ S)
            rep.trials += 1
            rep.residuals.append(r)
            if r > rep.max_residual:
                rep.max_residual = r
                if r > threshold:
                    rep.witness = {"trial": t, "A": tuple_to_json(A), "S": tuple_to_json(S), "residual": r}
            break
        else:
            rep.skipped += 1
    return rep


def _checked(F: FreeFunctionSpec, X: np.ndarray) -> np.ndarray:
    evaluate(F, X)
    return X


# -- representation of real monotone functions ------------------------------------


def make_corollary_form(G: FreeFunctionSpec, H: FreeFunctionSpec, name: str | None = None,
                        probe_seed: int = 0) -> FreeFunctionSpec:
    """Build ``F(X) = G(Re X) + i H(Re X, Im X)``.

    ``G`` has arity k and must map Hermitian tuples to Hermitian matrices.
    ``H`` takes 2k Hermitian arguments: variables 1..k receive ``Re X`` and
    k+1..2k receive ``Im X``; its output must be Hermitian as well.
    """
    k = G.arity
    if ex.max_var(H.expr) > 2 * k:
        raise ArityError(f"H may use at most {2 * k} variables")
    rng = np.random.default_rng([probe_seed, 211])
    for n in (2, 3):
        R = np.stack([random_pd(rng, n) for _ in range(k)])
        W = np.stack([random_hermitian(rng, n) for _ in range(k)])
        if not is_hermitian(evaluate(G, R, check_domain=False), rtol=1e-9):
            raise ContractError(f"G ({G.name}) does not return Hermitian values on Hermitian input")
        RW = np.concatenate([R, W])
        if not is_hermitian(_eval(H.expr, RW, n), rtol=1e-9):
            raise ContractError(f"H ({H.name}) does not return Hermitian values on Hermitian input")
    re_map = {j: ex.Re(ex.Var(j)) for j in range(1, k + 1)}
    h_map = dict(re_map)
    h_map.update({k + j: ex.Im(ex.Var(j)) for j in range(1, k + 1)})
    expr = ex.Add((ex.substitute(G.expr, re_map), ex.Mul((ex.Const(1j), ex.substitute(H.expr, h_map)))))
    domain = "all" if G.domain == "all" else "P_Re"
    return FreeFunctionSpec(expr, k, domain, name or f"cor[{G.name};{H.name}]")
