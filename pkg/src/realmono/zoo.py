"""Shipped free functions with known behaviour, used by tests and the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import expr as ex
from .errors import ConfigurationError
from .free import FreeFunctionSpec, make_corollary_form
from .hermitian import re_part

X1, X2 = ex.var(1), ex.var(2)


@dataclass(frozen=True)
class ZooEntry:
    spec: FreeFunctionSpec
    monotone: bool | None  # known real monotonicity on the declared domain; None if not asserted
    concave: bool | None
    into_p_re: bool  # maps P_Re into P_Re
    holomorphic: bool  # free holomorphic (no Re/Im/adj nodes)
    derivative: Callable | None = None  # closed-form DF(X)[H] on tuples, if known
    note: str = ""

    @property
    def name(self) -> str:
        return self.spec.name


def _affine_derivative(coeffs):
    return lambda X, H: sum(c * h for c, h in zip(coeffs, H))


def _inv(M):
    return np.linalg.inv(M)


def _build() -> dict[str, ZooEntry]:
    entries = []

    def add(expr, arity, domain, name, **kw):
        entries.append(ZooEntry(FreeFunctionSpec(expr, arity, domain, name), **kw))

    add(X1, 1, "P_Re", "identity", monotone=True, concave=True, into_p_re=True, holomorphic=True,
        derivative=lambda X, H: H[0])
    add(1 + 2 * X1 + 3 * X2, 2, "all", "affine-pos", monotone=True, concave=True, into_p_re=True,
        holomorphic=True, derivative=_affine_derivative([2, 3]), note="cI + aX1 + bX2 with a, b >= 0")
    add(1 + 2 * X1 - X2, 2, "all", "affine-neg", monotone=False, concave=True, into_p_re=False,
        holomorphic=True, derivative=_affine_derivative([2, -1]))
    add(X1 + 1j * X2, 2, "all", "affine-complex", monotone=False, concave=True, into_p_re=False,
        holomorphic=True, derivative=_affine_derivative([1, 1j]))
    add(X1 ** 2, 1, "P_Re", "square", monotone=False, concave=False, into_p_re=False, holomorphic=True,
        derivative=lambda X, H: X[0] @ H[0] + H[0] @ X[0])
    add(X1 ** 3, 1, "P_Re", "cube", monotone=False, concave=False, into_p_re=False, holomorphic=True,
        derivative=lambda X, H: X[0] @ X[0] @ H[0] + X[0] @ H[0] @ X[0] + H[0] @ X[0] @ X[0])
    add(-ex.inv(X1), 1, "P_Re", "neg-inverse", monotone=False, concave=False, into_p_re=False,
        holomorphic=True, derivative=lambda X, H: _inv(X[0]) @ H[0] @ _inv(X[0]))
    add(ex.inv(X1), 1, "P_Re", "inverse", monotone=False, concave=False, into_p_re=True,
        holomorphic=True, derivative=lambda X, H: -_inv(X[0]) @ H[0] @ _inv(X[0]))
    add(-ex.inv(ex.re(X1)), 1, "P_Re", "neg-re-inverse", monotone=True, concave=True, into_p_re=False,
        holomorphic=False,
        derivative=lambda X, H: _inv(re_part(X[0])) @ re_part(H[0]) @ _inv(re_part(X[0])))
    add(ex.sqrt(ex.re(X1)), 1, "P_Re", "sqrt-re", monotone=True, concave=True, into_p_re=True,
        holomorphic=False)
    add(ex.geomean(X1, X2), 2, "P_Re", "geomean", monotone=False, concave=None, into_p_re=False,
        holomorphic=True, note="principal-root formula on accretive pairs")
    add(ex.geomean(X1, X2), 2, "hermitian_PD", "geomean-hpd", monotone=True, concave=True,
        into_p_re=True, holomorphic=False, note="classical Kubo-Ando geometric mean")

    R1, W1 = ex.var(1), ex.var(2)
    cor_sqrt = make_corollary_form(FreeFunctionSpec(ex.sqrt(R1), 1, "hermitian_PD", "sqrt"),
                                   FreeFunctionSpec(R1 ** 2 + W1, 2, "all", "R^2+W"), "cor-sqrt")
    entries.append(ZooEntry(cor_sqrt, monotone=True, concave=True, into_p_re=True, holomorphic=False))
    cor_inv = make_corollary_form(FreeFunctionSpec(-ex.inv(R1), 1, "hermitian_PD", "-inv"),
                                  FreeFunctionSpec(W1 ** 3, 2, "all", "W^3"), "cor-neg-inv")
    entries.append(ZooEntry(cor_inv, monotone=True, concave=True, into_p_re=False, holomorphic=False))
    return {e.name: e for e in entries}


ZOO: dict[str, ZooEntry] = _build()


def get(name: str) -> ZooEntry:
    try:
        return ZOO[name]
    except KeyError:
        raise ConfigurationError(f"unknown zoo member {name!r}; known: {', '.join(ZOO)}") from None


def spec(name: str) -> FreeFunctionSpec:
    return get(name).spec


def affine(a0: complex, coeffs, domain: str = "all", name: str = "affine") -> FreeFunctionSpec:
    """``a0*I + sum_j a_j X_j``."""
    e = ex.const(a0)
    for j, a in enumerate(coeffs, start=1):
        e = e + a * ex.var(j)
    return FreeFunctionSpec(e, len(coeffs), domain, name)
