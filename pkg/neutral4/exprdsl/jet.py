"""Second-order forward-mode jets of scalar expressions.

A `Jet2` carries a value, its gradient and its Hessian with respect to the
four chart coordinates. Every operation builds the Hessian as a sum of
exactly symmetric terms, so symmetry holds bit for bit rather than to
rounding.
"""

import math
from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np

from neutral4.errors import DomainError, UnknownSymbolError
from neutral4.exprdsl.expr import Binary, Const, Coord, Expr, Param, Pow, Unary, pretty

DIM = 4
_UPPER = np.triu_indices(DIM)


def _symmetric_outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    cross = np.outer(a, b)
    return cross + cross.T


@dataclass(frozen=True)
class Jet2:
    """Value, gradient and symmetric Hessian of a scalar at a point."""

    value: float
    gradient: np.ndarray
    hessian: np.ndarray

    @classmethod
    def constant(cls, value: float) -> "Jet2":
        return cls(float(value), np.zeros(DIM), np.zeros((DIM, DIM)))

    @classmethod
    def variable(cls, value: float, index: int) -> "Jet2":
        gradient = np.zeros(DIM)
        gradient[index] = 1.0
        return cls(float(value), gradient, np.zeros((DIM, DIM)))

    def packed(self) -> np.ndarray:
        """The 10 independent Hessian entries, upper triangle in row order."""
        return self.hessian[_UPPER]

    def __add__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value + other.value, self.gradient + other.gradient, self.hessian + other.hessian)

    def __sub__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value - other.value, self.gradient - other.gradient, self.hessian - other.hessian)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.gradient, -self.hessian)

    def __mul__(self, other: "Jet2") -> "Jet2":
        hessian = (self.hessian * other.value + other.hessian * self.value) + _symmetric_outer(
            self.gradient, other.gradient
        )
        return Jet2(
            self.value * other.value,
            self.gradient * other.value + other.gradient * self.value,
            hessian,
        )

    def chain(self, f: float, df: float, ddf: float) -> "Jet2":
        """Compose with a scalar function given its value and first two derivatives here."""
        return Jet2(
            f,
            df * self.gradient,
            df * self.hessian + ddf * np.outer(self.gradient, self.gradient),
        )

    def is_finite(self) -> bool:
        return bool(
            math.isfinite(self.value)
            and np.all(np.isfinite(self.gradient))
            and np.all(np.isfinite(self.hessian))
        )

    def __repr__(self) -> str:
        return f"Jet2(value={self.value!r}, gradient={self.gradient.tolist()!r})"


def _unary(node: Unary, u: Jet2) -> Jet2:
    v = u.value
    if node.op == "neg":
        return -u
    if node.op == "exp":
        e = math.exp(v) if v < 709.0 else math.inf
        return u.chain(e, e, e)
    if node.op == "log":
        if v <= 0.0:
            raise DomainError("log of non-positive value", pretty(node))
        return u.chain(math.log(v), 1.0 / v, -1.0 / (v * v))
    if node.op == "sin":
        s, c = math.sin(v), math.cos(v)
        return u.chain(s, c, -s)
    if node.op == "cos":
        s, c = math.sin(v), math.cos(v)
        return u.chain(c, -s, -c)
    if node.op == "sqrt":
        if v <= 0.0:
            raise DomainError("sqrt of non-positive value", pretty(node))
        s = math.sqrt(v)
        return u.chain(s, 0.5 / s, -0.25 / (s * v))
    if node.op == "recip":
        if v == 0.0:
            raise DomainError("division by zero", pretty(node))
        r = 1.0 / v
        return u.chain(r, -r * r, 2.0 * r * r * r)
    raise UnknownSymbolError(node.op, operation="evaluate_jet2")


def _reciprocal(node: Expr, u: Jet2) -> Jet2:
    if u.value == 0.0:
        raise DomainError("division by zero", pretty(node))
    r = 1.0 / u.value
    return u.chain(r, -r * r, 2.0 * r * r * r)


def _power(node: Pow, u: Jet2) -> Jet2:
    n = node.exponent
    v = u.value
    if n == 0:
        return Jet2.constant(1.0)
    if n == 1:
        return u
    if v == 0.0 and n < 0:
        raise DomainError("division by zero", pretty(node))
    return u.chain(v**n, n * v ** (n - 1), n * (n - 1) * v ** (n - 2))


def _evaluate(node: Expr, point: Sequence[float], params: Dict[str, float]) -> Jet2:
    if isinstance(node, Const):
        return Jet2.constant(node.value)
    if isinstance(node, Coord):
        return Jet2.variable(point[node.index], node.index)
    if isinstance(node, Param):
        if node.name not in params:
            raise UnknownSymbolError(node.name, operation="evaluate_jet2")
        return Jet2.constant(params[node.name])
    if isinstance(node, Unary):
        result = _unary(node, _evaluate(node.arg, point, params))
    elif isinstance(node, Binary):
        a = _evaluate(node.left, point, params)
        b = _evaluate(node.right, point, params)
        if node.op == "add":
            result = a + b
        elif node.op == "sub":
            result = a - b
        elif node.op == "mul":
            result = a * b
        else:
            result = a * _reciprocal(node, b)
    elif isinstance(node, Pow):
        result = _power(node, _evaluate(node.base, point, params))
    else:
        raise TypeError(f"not an expression node: {node!r}")

    if not result.is_finite():
        raise DomainError("non-finite value", pretty(node))
    return result


def evaluate_jet2(expr: Expr, point: Sequence[float], params: Dict[str, float]) -> Jet2:
    """
    Evaluate an expression and its exact first and second derivatives.

    Args:
        expr: Expression tree
        point: Four chart coordinates
        params: Parameter bindings

    Returns:
        Jet2 at the point

    Raises:
        DomainError: log or sqrt of a non-positive value, division by zero,
            or any non-finite intermediate
        UnknownSymbolError: a parameter without a binding
    """
    return _evaluate(expr, point, params)
