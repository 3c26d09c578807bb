"""Scalar several-variable toolkit: Wirtinger derivatives, Levi forms, linearity test.

Fields are expression trees over ``z_1..z_m`` (the same grammar as free
functions, read at 1x1: ``adj`` is complex conjugation). All derivatives are
central differences with one Richardson step, so fields may freely mix
``z``, ``conj(z)``, ``Re z`` and ``Im z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .errors import ConfigurationError, SpecError, StepSizeError
from .free import FreeFunctionSpec, evaluate

FIELD_CLASSES = ("holomorphic", "general")
INDEPENDENCE_TOL = 1e-8
FIRST_STEP = 1e-4
SECOND_STEP = 1e-3


def _eval_scalar(e: ex.Expr, Z: np.ndarray) -> np.ndarray:
    """Evaluate on a batch of points ``Z`` of shape (P, m); returns shape (P,)."""
    if isinstance(e, ex.Var):
        if e.index > Z.shape[1]:
            raise SpecError(f"z_{e.index} used but the field has m={Z.shape[1]}")
        return Z[:, e.index - 1]
    if isinstance(e, ex.Const):
        return np.full(Z.shape[0], e.value, dtype=np.complex128)
    if isinstance(e, ex.Add):
        return sum(_eval_scalar(a, Z) for a in e.args)
    if isinstance(e, ex.Mul):
        out = _eval_scalar(e.args[0], Z)
        for a in e.args[1:]:
            out = out * _eval_scalar(a, Z)
        return out
    if isinstance(e, ex.Pow):
        return _eval_scalar(e.arg, Z) ** e.exponent
    if isinstance(e, ex.GeoMean):
        a, b = _eval_scalar(e.left, Z), _eval_scalar(e.right, Z)
        return np.sqrt(a) * np.sqrt(b / a)
    x = _eval_scalar(e.arg, Z)
    if isinstance(e, ex.Inv):
        return 1.0 / x
    if isinstance(e, ex.Sqrt):
        return np.sqrt(x)
    if isinstance(e, ex.Re):
        return x.real.astype(np.complex128)
    if isinstance(e, ex.Im):
        return x.imag.astype(np.complex128)
    if isinstance(e, ex.Adj):
        return np.conj(x)
    if isinstance(e, ex.Exp):
        return np.exp(x)
    raise SpecError(f"unknown node {e!r}")


@dataclass(frozen=True)
class ScalarField:
    expr: ex.Expr
    m: int
    cls: str = "general"
    radius: float = 1.0  # open polydisc around 0
    name: str = "f"

    def __post_init__(self):
        if self.cls not in FIELD_CLASSES:
            raise ConfigurationError(f"field class must be one of {FIELD_CLASSES}, got {self.cls!r}")
        if self.m < 1 or ex.max_var(self.expr) > self.m:
            raise SpecError(f"field uses z_{ex.max_var(self.expr)} but declares m={self.m}")
        if not self.radius > 0:
            raise ConfigurationError("polydisc radius must be positive")

    def __call__(self, z) -> np.ndarray:
        """Value at a point (shape (m,)) or a batch (shape (P, m))."""
        Z = np.asarray(z, dtype=np.complex128)
        single = Z.ndim == 1
        Z = np.atleast_2d(Z)
        if Z.shape[1] != self.m:
            raise SpecError(f"points have {Z.shape[1]} coordinates, field has m={self.m}")
        out = _eval_scalar(self.expr, Z)
        return out[0] if single else out

    def in_domain(self, Z, margin: float = 0.0) -> bool:
        return bool(np.all(np.abs(np.atleast_2d(Z)) < self.radius - margin))

    def real_part(self) -> ScalarField:
        return ScalarField(ex.Re(self.expr), self.m, "general", self.radius, f"Re[{self.name}]")

    @classmethod
    def from_free(cls, F: FreeFunctionSpec, radius: float = 0.5) -> ScalarField:
        """1x1 restriction ``f(z) = F(b + z) - F(b)``, b = 0 if F is defined there, else 1."""
        b = 0.0 if F.domain == "all" else 1.0
        shifted = ex.substitute(F.expr, {j: ex.Var(j) + b for j in range(1, F.arity + 1)}) if b else F.expr
        fb = complex(evaluate(F, np.full((F.arity, 1, 1), b, dtype=np.complex128))[0, 0])
        return cls(shifted - fb, F.arity, "holomorphic" if _holomorphic_tree(F.expr) else "general",
                   radius, f"{F.name}|1x1")

    def to_json(self) -> dict:
        return {"expr": ex.to_json(self.expr), "m": self.m, "class": self.cls, "radius": self.radius,
                "name": self.name}

    @classmethod
    def from_json(cls, obj: dict) -> ScalarField:
        try:
            return cls(ex.from_json(obj["expr"]), int(obj["m"]), obj.get("class", "general"),
                       float(obj.get("radius", 1.0)), obj.get("name", "f"))
        except KeyError as exc:
            raise SpecError(f"scalar field JSON is missing {exc}") from None


def _holomorphic_tree(e: ex.Expr) -> bool:
    return not any(isinstance(n, (ex.Re, ex.Im, ex.Adj)) for n in ex.walk(e))


def _unit(m: int, j: int) -> np.ndarray:
    e = np.zeros(m, dtype=np.complex128)
    e[j] = 1.0
    return e


def _check_stencil(f: ScalarField, Z):
    if not f.in_domain(Z):
        raise StepSizeError(f"stencil leaves the polydisc of radius {f.radius}")


def partials(f: ScalarField, z, h: float = FIRST_STEP, richardson: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """``(df/dx_j, df/dy_j)`` by central differences."""
    z = np.asarray(z, dtype=np.complex128)
    m = f.m
    dirs = np.concatenate([np.eye(m), 1j * np.eye(m)])  # x directions then y directions

    def central(step):
        P = np.concatenate([z + step * dirs, z - step * dirs])
        _check_stencil(f, P)
        v = f(P)
        return (v[: 2 * m] - v[2 * m:]) / (2 * step)

    d = central(h)
    if richardson:
        d = (4 * central(h / 2) - d) / 3
    return d[:m], d[m:]


def wirtinger(f: ScalarField, z, h: float = FIRST_STEP, richardson: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """``(d f, dbar f)`` with ``d = (dx - i dy)/2`` and ``dbar = (dx + i dy)/2``."""
    if h <= 0:
        raise StepSizeError("step must be positive")
    dx, dy = partials(f, z, h, richardson)
    return (dx - 1j * dy) / 2, (dx + 1j * dy) / 2


def real_hessian(u: ScalarField, z, h: float = SECOND_STEP, richardson: bool = True,
                 coords: str = "xy") -> np.ndarray:
    """Second partials of u over real coordinates.

    ``coords="xy"`` orders the variables ``x_1..x_m, y_1..y_m`` (size 2m);
    ``coords="x"`` keeps the real directions only (size m).
    """
    z = np.asarray(z, dtype=np.complex128)
    m = u.m
    dirs = np.concatenate([np.eye(m), 1j * np.eye(m)]) if coords == "xy" else np.eye(m).astype(np.complex128)
    p = dirs.shape[0]
    a = np.repeat(dirs, p, axis=0)
    b = np.tile(dirs, (p, 1))

    def stencil(step):
        P = np.concatenate([z + step * (a + b), z + step * (a - b), z - step * (a - b), z - step * (a + b)])
        _check_stencil(u, P)
        v = u(P)
        q = p * p
        return ((v[:q] - v[q:2 * q] - v[2 * q:3 * q] + v[3 * q:]) / (4 * step * step)).reshape(p, p)

    H = stencil(h)
    if richardson:
        H = (4 * stencil(h / 2) - H) / 3
    return H


def levi_matrix(u: ScalarField, z, h: float = SECOND_STEP, richardson: bool = True) -> np.ndarray:
    """``M_jk = d^2 u / dz_j dzbar_k``."""
    m = u.m
    H = real_hessian(u, z, h, richardson)
    xx, yy = H[:m, :m], H[m:, m:]
    xy, yx = H[:m, m:], H[m:, :m]
    return (xx + yy + 1j * (xy - yx)) / 4


def levi_form(u: ScalarField, z, c, d, h: float = SECOND_STEP) -> complex:
    """``sum_jk M_jk c_j conj(d_k)``."""
    c = np.asarray(c, dtype=np.complex128).reshape(-1)
    d = np.asarray(d, dtype=np.complex128).reshape(-1)
    return complex(c @ levi_matrix(u, z, h) @ np.conj(d))


def pluriharmonic_residual(u: ScalarField, z, h: float = SECOND_STEP) -> float:
    """Largest entry modulus of the Levi matrix at z."""
    return float(np.max(np.abs(levi_matrix(u, z, h))))


def holomorphy_residual(f: ScalarField, points, h: float = FIRST_STEP) -> float:
    """``max ||dbar f||`` over the given points."""
    return max(float(np.max(np.abs(wirtinger(f, z, h)[1]))) for z in np.atleast_2d(points))


def polydisc_points(f: ScalarField, count: int, seed: int = 0, fill: float = 0.8) -> np.ndarray:
    """Seeded points with every coordinate in the disc of radius ``fill * radius``."""
    rng = np.random.default_rng([seed, 503, f.m])
    r = fill * f.radius * np.sqrt(rng.uniform(size=(count, f.m)))
    return r * np.exp(2j * np.pi * rng.uniform(size=(count, f.m)))


@dataclass
class LinearityReport:
    field: str
    outcome: str  # "linear" | "not_linear" | "hypothesis_not_met"
    f0: complex
    im_independent: bool | None = None
    im_dependence: float | None = None
    hessian_max: float | None = None
    coefficients: list | None = None
    fit_residual: float | None = None
    probes: int = 0
    note: str = ""
    details: dict = field(default_factory=dict)

    @property
    def linear(self) -> bool:
        return self.outcome == "linear"

    def to_json(self) -> dict:
        c = None if self.coefficients is None else [[a.real, a.imag] for a in self.coefficients]
        return {"claim": "linearity", "field": self.field, "outcome": self.outcome,
                "f0": [self.f0.real, self.f0.imag], "im_independent": self.im_independent,
                "im_dependence": self.im_dependence, "hessian_max": self.hessian_max, "coefficients": c,
                "fit_residual": self.fit_residual, "probes": self.probes, "note": self.note}


def linearity_test(f: ScalarField, probes=64, tol: float = 1e-6, seed: int = 0,
                   indep_tol: float = INDEPENDENCE_TOL, hessian_points: int = 8) -> LinearityReport:
    """Three-stage test of the rigidity lemma on a holomorphic field with ``f(0) = 0``.

    (i) Does ``u = Re f`` depend on ``Im z``? Each probe z is compared with a
    point of equal real part and a fresh imaginary part, relative to
    ``1 + |u(z)|``. (ii) When it does not, the real Hessian of u along real
    directions is reported at the first ``hessian_points`` probes. (iii) A
    linear model ``a . z`` is fitted by least squares; the verdict is
    ``linear`` iff the worst relative residual is at most ``tol``. Stage (i)
    decides whether the lemma's hypothesis holds, stage (iii) the verdict.
    """
    f0 = complex(f(np.zeros(f.m)))
    rep = LinearityReport(f.name, "hypothesis_not_met", f0)
    if f.cls != "holomorphic":
        rep.note = "field is not declared holomorphic"
        return rep
    if abs(f0) > tol:
        rep.note = f"f(0) = {f0:.3e} is not zero"
        return rep

    rng = np.random.default_rng([seed, 509, f.m])
    Z = polydisc_points(f, probes, seed) if np.isscalar(probes) else np.atleast_2d(np.asarray(probes, complex))
    rep.probes = Z.shape[0]
    lim = 0.8 * f.radius
    # fresh imaginary parts keep each coordinate inside the polydisc
    room = np.sqrt(np.maximum(lim ** 2 - Z.real ** 2, 0.0))
    Z2 = Z.real + 1j * room * rng.uniform(-1, 1, size=Z.shape)
    u1, u2 = f(Z).real, f(Z2).real
    dep = float(np.max(np.abs(u1 - u2) / (1 + np.abs(u1))))
    rep.im_dependence = dep
    rep.im_independent = dep <= indep_tol

    if rep.im_independent:
        u = f.real_part()
        rep.hessian_max = max(float(np.max(np.abs(real_hessian(u, z, coords="x")))) for z in Z[:hessian_points])

    vals = f(Z)
    a, *_ = np.linalg.lstsq(Z, vals, rcond=None)
    rep.coefficients = [complex(c) for c in a]
    rep.fit_residual = float(np.max(np.abs(vals - Z @ a) / (1 + np.abs(vals))))
    rep.outcome = "linear" if rep.fit_residual <= tol else "not_linear"
    if not rep.im_independent:
        rep.note = "Re f depends on Im z"
    return rep


# -- bank -----------------------------------------------------------------------


def _bank() -> dict[str, ScalarField]:
    z1, z2 = ex.var(1), ex.var(2)
    out = {}

    def add(name, e, m, cls="holomorphic", radius=2.0):
        out[name] = ScalarField(e, m, cls, radius, name)

    add("z", z1, 1)
    add("2z", 2 * z1, 1)
    add("iz", 1j * z1, 1)
    add("(1+i)z", (1 + 1j) * z1, 1)
    add("z1+3z2", z1 + 3 * z2, 2)
    add("2z1-iz2", 2 * z1 - 1j * z2, 2)
    add("z^2", z1 ** 2, 1)
    add("z^3", z1 ** 3, 1)
    add("exp-1", ex.exp(z1) - 1, 1)
    add("z1z2", z1 * z2, 2)
    add("z1^2+z2", z1 ** 2 + z2, 2)
    add("z/(1+z/4)", z1 * ex.inv(1 + 0.25 * z1), 1)
    add("conj-z", ex.adj(z1), 1, "general")
    add("abs2", z1 * ex.adj(z1), 1, "general")
    add("re-z-squared", ex.re(z1) ** 2 - ex.im(z1) ** 2, 1, "general")
    return out


BANK: dict[str, ScalarField] = _bank()
LINEAR_BANK = ("z", "2z", "iz", "(1+i)z", "z1+3z2", "2z1-iz2")


def bank_field(name: str) -> ScalarField:
    try:
        return BANK[name]
    except KeyError:
        raise ConfigurationError(f"unknown bank field {name!r}; known: {', '.join(BANK)}") from None
