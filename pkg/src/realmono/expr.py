"""Expression trees shared by free functions and scalar fields.

Variables are 1-based: ``var(1)`` is X_1 (or z_1). Constants are scalars only;
in a matrix context a constant ``c`` stands for ``c*I`` at every dimension.

JSON grammar (one object per node)::

    {"op": "var", "index": 1}
    {"op": "const", "value": 2.5}          # or [re, im]
    {"op": "add" | "mul", "args": [node, ...]}
    {"op": "pow", "arg": node, "exponent": 3}
    {"op": "inv" | "sqrt" | "re" | "im" | "adj" | "exp", "arg": node}
    {"op": "geomean", "args": [node, node]}

``mul`` is the (noncommutative) matrix product taken left to right.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass

import numpy as np

from .errors import SpecError


class Expr:
    def __add__(self, other):
        return Add((self, lift(other)))

    def __radd__(self, other):
        return Add((lift(other), self))

    def __sub__(self, other):
        return Add((self, Mul((Const(-1.0), lift(other)))))

    def __rsub__(self, other):
        return Add((lift(other), Mul((Const(-1.0), self))))

    def __neg__(self):
        return Mul((Const(-1.0), self))

    def __mul__(self, other):
        return Mul((self, lift(other)))

    def __rmul__(self, other):
        return Mul((lift(other), self))

    def __truediv__(self, other):
        if not isinstance(other, numbers.Number):
            raise SpecError("division is only defined by scalars; use inv()")
        return Mul((Const(1 / other), self))

    def __pow__(self, exponent):
        return Pow(self, exponent)

    def children(self) -> tuple[Expr, ...]:
        return ()


@dataclass(frozen=True, eq=True)
class Var(Expr):
    index: int

    def __post_init__(self):
        if not isinstance(self.index, numbers.Integral) or self.index < 1:
            raise SpecError(f"variable index must be a positive integer, got {self.index!r}")


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: complex

    def __post_init__(self):
        v = self.value
        if isinstance(v, np.ndarray):
            if v.size != 1:
                raise SpecError(
                    f"constant of shape {v.shape} is not dimension-uniform; only scalar constants (c*I) are allowed")
            v = v.reshape(()).item()
        if not isinstance(v, numbers.Number):
            raise SpecError(f"constant must be a scalar, got {type(v).__name__}")
        if not np.isfinite(complex(v)):
            raise SpecError("constant must be finite")
        object.__setattr__(self, "value", complex(v))


@dataclass(frozen=True, eq=True)
class Add(Expr):
    args: tuple

    def children(self):
        return self.args


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    args: tuple

    def children(self):
        return self.args


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    arg: Expr
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, numbers.Integral) or self.exponent < 0:
            raise SpecError("pow exponent must be a non-negative integer; use inv() for negative powers")

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True)
class Unary(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)


class Inv(Unary):
    op = "inv"


class Sqrt(Unary):
    op = "sqrt"


class Re(Unary):
    op = "re"


class Im(Unary):
    op = "im"


class Adj(Unary):
    op = "adj"


class Exp(Unary):
    op = "exp"


@dataclass(frozen=True, eq=True)
class GeoMean(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)


_UNARY = {cls.op: cls for cls in (Inv, Sqrt, Re, Im, Adj, Exp)}


def lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(x)


def var(index: int) -> Var:
    return Var(index)


def const(value) -> Const:
    return Const(value)


def inv(x) -> Inv:
    return Inv(lift(x))


def sqrt(x) -> Sqrt:
    return Sqrt(lift(x))


def re(x) -> Re:
    return Re(lift(x))


def im(x) -> Im:
    return Im(lift(x))


def adj(x) -> Adj:
    return Adj(lift(x))


def exp(x) -> Exp:
    return Exp(lift(x))


def geomean(a, b) -> GeoMean:
    return GeoMean(lift(a), lift(b))


def walk(e: Expr):
    yield e
    for c in e.children():
        yield from walk(c)


def max_var(e: Expr) -> int:
    return max((n.index for n in walk(e) if isinstance(n, Var)), default=0)


def substitute(e: Expr, mapping: dict) -> Expr:
    """Replace ``Var(i)`` by ``mapping[i]`` throughout."""
    if isinstance(e, Var):
        return mapping.get(e.index, e)
    if isinstance(e, Const):
        return e
    if isinstance(e, Add):
        return Add(tuple(substitute(a, mapping) for a in e.args))
    if isinstance(e, Mul):
        return Mul(tuple(substitute(a, mapping) for a in e.args))
    if isinstance(e, Pow):
        return Pow(substitute(e.arg, mapping), e.exponent)
    if isinstance(e, Unary):
        return type(e)(substitute(e.arg, mapping))
    if isinstance(e, GeoMean):
        return GeoMean(substitute(e.left, mapping), substitute(e.right, mapping))
    raise SpecError(f"unknown node {e!r}")


def to_json(e: Expr) -> dict:
    if isinstance(e, Var):
        return {"op": "var", "index": e.index}
    if isinstance(e, Const):
        v = e.value
        return {"op": "const", "value": v.real if v.imag == 0 else [v.real, v.imag]}
    if isinstance(e, Add):
        return {"op": "add", "args": [to_json(a) for a in e.args]}
    if isinstance(e, Mul):
        return {"op": "mul", "args": [to_json(a) for a in e.args]}
    if isinstance(e, Pow):
        return {"op": "pow", "arg": to_json(e.arg), "exponent": e.exponent}
    if isinstance(e, Unary):
        return {"op": e.op, "arg": to_json(e.arg)}
    if isinstance(e, GeoMean):
        return {"op": "geomean", "args": [to_json(e.left), to_json(e.right)]}
    raise SpecError(f"unknown node {e!r}")


def from_json(obj) -> Expr:
    if isinstance(obj, numbers.Number):
        return Const(obj)
    if not isinstance(obj, dict) or "op" not in obj:
        raise SpecError(f"expression node must be an object with an 'op' field, got {obj!r}")
    op = obj["op"]
    try:
        if op == "var":
            return Var(int(obj["index"]))
        if op == "const":
            v = obj["value"]
            if isinstance(v, list):
                if len(v) == 2 and all(isinstance(t, numbers.Number) for t in v):
                    return Const(complex(v[0], v[1]))
                raise SpecError("constant is not a scalar [re, im] pair; matrix constants are not dimension-uniform")
            if isinstance(v, dict):
                raise SpecError("matrix constants are not dimension-uniform")
            return Const(v)
        if op in ("add", "mul"):
            args = tuple(from_json(a) for a in obj["args"])
            if not args:
                raise SpecError(f"'{op}' needs at least one argument")
            return (Add if op == "add" else Mul)(args)
        if op == "pow":
            return Pow(from_json(obj["arg"]), obj["exponent"])
        if op in _UNARY:
            return _UNARY[op](from_json(obj["arg"]))
        if op == "geomean":
            a, b = obj["args"]
            return GeoMean(from_json(a), from_json(b))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"malformed '{op}' node: {exc}") from None
    raise SpecError(f"unknown op {op!r}")
