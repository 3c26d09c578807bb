"""Finite-difference Frechet derivatives and the derivative monotonicity criterion.

Derivatives are directional, ``DF(X)[H] = d/dt F(X + tH)`` at t = 0, taken in
the real-linear sense: functions containing Re/Im/adjoint nodes are not
holomorphic, so complex-step differentiation is not an option.
"""

from __future__ import annotations

import threading

import numpy as np
from scipy.integrate import simpson

from ..errors import DomainError, StepSizeError
from ..free import FreeFunctionSpec, evaluate, sample_point
from ..hermitian import (
    as_tuple,
    norm,
    random_hermitian,
    random_psd_increment,
    tuple_to_json,
)
from .report import CertificateReport, TrialResult, run_trials, scaled_leq, trial_seed, vec_json

DERIVATIVE_TAG = 17
DEFAULT_STEP = 1e-5


def frechet_derivative(F: FreeFunctionSpec, X, H, h_step: float = DEFAULT_STEP, full_output: bool = False):
    """Central difference of ``F`` along ``H`` with one Richardson extrapolation.

    The step is ``h_step * (1 + ||X||)`` measured in the norm of ``h*H``.
    With ``full_output`` returns ``(derivative, error_estimate)``.
    """
    X, H = as_tuple(X), as_tuple(H)
    if X.shape != H.shape:
        raise DomainError(f"direction shape {H.shape} does not match point shape {X.shape}")
    hn = norm(H)
    if hn == 0:
        D = np.zeros(X.shape[1:], dtype=np.complex128)
        return (D, 0.0) if full_output else D
    h = h_step * (1.0 + norm(X)) / hn

    def central(step):
        try:
            return (evaluate(F, X + step * H) - evaluate(F, X - step * H)) / (2 * step)
        except DomainError as exc:
            raise StepSizeError(f"stencil of size {step:.3e} left the domain: {exc}") from None

    d1 = central(h)
    d2 = central(h / 2)
    D = (4 * d2 - d1) / 3
    if full_output:
        return D, norm(D - d2)
    return D


def _derivative_retrying(F, X, H, h_step=DEFAULT_STEP, halvings=6):
    for _ in range(halvings):
        try:
            return frechet_derivative(F, X, H, h_step)
        except StepSizeError:
            h_step /= 2
    return frechet_derivative(F, X, H, h_step)


def sample_direction(domain: str, n: int, rng: np.random.Generator, kind: str | None = None) -> np.ndarray:
    """A real-positive direction: Re H PSD (possibly singular) plus an arbitrary imaginary part.

    ``kind`` is one of ``general``, ``boundary`` (Re H = 0) or ``hermitian``;
    Hermitian domains only admit Hermitian PSD directions.
    """
    if domain == "hermitian_PD":
        return random_psd_increment(rng, n)
    kind = kind or ("general", "boundary", "hermitian")[int(rng.integers(3))]
    if kind == "boundary":
        return 1j * random_hermitian(rng, n)
    P = random_psd_increment(rng, n)
    if kind == "hermitian":
        return P
    return P + 1j * random_hermitian(rng, n)


def amplify(X, m: int) -> np.ndarray:
    """``X (x) I_m`` componentwise."""
    return np.stack([np.kron(x, np.eye(m)) for x in as_tuple(X)])


def amplification_residual(F: FreeFunctionSpec, X, H, V, h_step: float = DEFAULT_STEP) -> float:
    """Relative residual of ``DF(X (x) I)[H (x) V] = DF(X)[H] (x) V`` for Hermitian V."""
    X, H = as_tuple(X), as_tuple(H)
    V = np.asarray(V, dtype=np.complex128)
    m = V.shape[0]
    lhs = _derivative_retrying(F, amplify(X, m), np.stack([np.kron(h, V) for h in H]), h_step)
    rhs = np.kron(_derivative_retrying(F, X, H, h_step), V)
    return norm(lhs - rhs) / max(1.0, norm(rhs))


def derivative_criterion(F: FreeFunctionSpec, X=None, trials: int = 200, seed: int = 0, tol: float = 1e-7,
                         n_list=(1, 2), amplifications=(1, 2), domain: str | None = None,
                         stop_on_violation: bool = True, workers: int = 1) -> CertificateReport:
    """Check ``Re DF(X)[H] >= 0`` for sampled real-positive directions H.

    With ``X`` given, every trial differentiates at that point; otherwise X is
    drawn per trial in dimensions ``n_list``. Trials cycle through the
    amplification levels m: the derivative is taken at ``X (x) I_m`` along a
    real-positive direction of size nm, which for a free function realises
    the amplified map ``id_m (x) DF(X)``. The worst residual of the
    amplification identity over Hermitian V is recorded in ``details``.
    """
    domain = domain or F.domain
    if X is not None:
        X = as_tuple(X)
        n_list = (X.shape[1],)
    report = CertificateReport("derivative_cp", F.name, list(n_list), 0, seed, tol,
                               details={"amplifications": list(amplifications), "amplification_residual": 0.0})
    lock = threading.Lock()

    def trial(n, t):
        rng = np.random.default_rng(trial_seed(seed, DERIVATIVE_TAG, n, t))
        if X is None:
            for _ in range(100):
                Xt = sample_point("P_Re" if domain == "all" else domain, n, F.arity, rng)
                try:
                    evaluate(F, Xt)
                    break
                except DomainError:
                    continue
        else:
            Xt = X
        m = amplifications[t % len(amplifications)]
        Xm = amplify(Xt, m) if m > 1 else Xt
        H = np.stack([sample_direction(domain, n * m, rng) for _ in range(F.arity)])
        D = _derivative_retrying(F, Xm, H)
        margin, v = scaled_leq(np.zeros_like(D), D)

        Hs = np.stack([sample_direction(domain, n, rng) for _ in range(F.arity)])
        V = random_hermitian(rng, 2)
        r = amplification_residual(F, Xt, Hs, V)
        with lock:
            report.details["amplification_residual"] = max(report.details["amplification_residual"], r)

        return TrialResult(margin, lambda: {"X": tuple_to_json(Xt), "amplification": m,
                                            "H": tuple_to_json(H), "DF(X)[H]": tuple_to_json(D),
                                            "witness_vector": vec_json(v)})

    return run_trials(report, trial, trials, stop_on_violation, workers)


def integral_reconstruction(F: FreeFunctionSpec, A, B, rtol: float = 1e-9, max_intervals: int = 2048,
                            h_step: float = DEFAULT_STEP) -> tuple[float, np.ndarray, int]:
    """Integrate ``DF(A(t))[B - A]`` over the segment ``A(t) = (1-t) A + t B``.

    Composite Simpson with the interval count doubled until two successive
    estimates agree to ``rtol``. Returns ``(relative_error, integral,
    intervals)`` where the error is measured against ``F(B) - F(A)``.
    """
    A, B = as_tuple(A), as_tuple(B)
    target = evaluate(F, B) - evaluate(F, A)
    direction = B - A
    cache = {}

    def integrand(t):
        if t not in cache:
            cache[t] = _derivative_retrying(F, (1 - t) * A + t * B, direction, h_step)
        return cache[t]

    def estimate(intervals):
        ts = np.linspace(0.0, 1.0, intervals + 1)
        vals = np.stack([integrand(float(t)) for t in ts])
        return simpson(vals, x=ts, axis=0)

    intervals = 16
    prev = estimate(intervals)
    while intervals < max_intervals:
        intervals *= 2
        cur = estimate(intervals)
        if norm(cur - prev) <= rtol * max(1.0, norm(cur)):
            prev = cur
            break
        prev = cur
    return norm(prev - target) / max(norm(target), 1e-300), prev, intervals
