"""Immutable scalar expression trees over four chart coordinates.

Nodes are frozen dataclasses, so structural equality is plain ``==`` and
trees can be shared freely between threads. The module-level builders
(`add`, `mul`, ...) fold trivial constants and back the arithmetic
operators on `Expr`; the parser constructs nodes directly so that printing
a parsed tree reproduces it exactly.
"""

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Sequence, Union

from neutral4.errors import DomainError, UnknownSymbolError

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt", "recip")
BINARY_OPS = ("add", "sub", "mul", "div")

PREC_ADD = 1
PREC_MUL = 2
PREC_UNARY = 3
PREC_POW = 4
PREC_ATOM = 5

Number = Union[int, float]


class Expr:
    """Base class of all expression nodes."""

    __slots__ = ()

    def __add__(self, other: Union["Expr", Number]) -> "Expr":
        return add(self, as_expr(other))

    def __radd__(self, other: Number) -> "Expr":
        return add(as_expr(other), self)

    def __sub__(self, other: Union["Expr", Number]) -> "Expr":
        return sub(self, as_expr(other))

    def __rsub__(self, other: Number) -> "Expr":
        return sub(as_expr(other), self)

    def __mul__(self, other: Union["Expr", Number]) -> "Expr":
        return mul(self, as_expr(other))

    def __rmul__(self, other: Number) -> "Expr":
        return mul(as_expr(other), self)

    def __truediv__(self, other: Union["Expr", Number]) -> "Expr":
        return div(self, as_expr(other))

    def __rtruediv__(self, other: Number) -> "Expr":
        return div(as_expr(other), self)

    def __neg__(self) -> "Expr":
        return neg(self)

    def __pow__(self, exponent: int) -> "Expr":
        return power(self, exponent)

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Coord(Expr):
    index: int
    name: str


@dataclass(frozen=True)
class Param(Expr):
    name: str


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    arg: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


ZERO = Const(0.0)
ONE = Const(1.0)


def as_expr(value: Union[Expr, Number]) -> Expr:
    if isinstance(value, Expr):
        return value
    return Const(float(value))


def is_const(expr: Expr, value: float | None = None) -> bool:
    if not isinstance(expr, Const):
        return False
    return value is None or expr.value == value


# Builders ----------------------------------------------------------------


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if is_const(a, 0.0):
        return b
    if is_const(b, 0.0):
        return a
    return Binary("add", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if is_const(b, 0.0):
        return a
    if is_const(a, 0.0):
        return neg(b)
    return Binary("sub", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if is_const(a, 0.0) or is_const(b, 0.0):
        return ZERO
    if is_const(a, 1.0):
        return b
    if is_const(b, 1.0):
        return a
    if is_const(a, -1.0):
        return neg(b)
    if is_const(b, -1.0):
        return neg(a)
    return Binary("mul", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0.0:
        return Const(a.value / b.value)
    if is_const(b, 1.0):
        return a
    if is_const(a, 0.0) and not is_const(b, 0.0):
        return ZERO
    return Binary("div", a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Unary) and a.op == "neg":
        return a.arg
    return Unary("neg", a)


def power(a: Expr, exponent: int) -> Expr:
    if exponent == 0:
        return ONE
    if exponent == 1:
        return a
    if isinstance(a, Const) and (a.value != 0.0 or exponent > 0):
        return Const(a.value**exponent)
    return Pow(a, exponent)


def call(name: str, a: Expr) -> Expr:
    if name not in FUNCTIONS:
        raise UnknownSymbolError(name, operation="call")
    return Unary(name, a)


# Structure ---------------------------------------------------------------


def free_symbols(expr: Expr) -> FrozenSet[str]:
    """Names of the coordinates and parameters an expression refers to."""
    if isinstance(expr, Coord):
        return frozenset({expr.name})
    if isinstance(expr, Param):
        return frozenset({expr.name})
    if isinstance(expr, Unary):
        return free_symbols(expr.arg)
    if isinstance(expr, Binary):
        return free_symbols(expr.left) | free_symbols(expr.right)
    if isinstance(expr, Pow):
        return free_symbols(expr.base)
    return frozenset()


def depends_on_coordinates(expr: Expr) -> bool:
    if isinstance(expr, Coord):
        return True
    if isinstance(expr, Unary):
        return depends_on_coordinates(expr.arg)
    if isinstance(expr, Binary):
        return depends_on_coordinates(expr.left) or depends_on_coordinates(expr.right)
    if isinstance(expr, Pow):
        return depends_on_coordinates(expr.base)
    return False


def differentiate(expr: Expr, index: int) -> Expr:
    """Symbolic partial derivative with respect to coordinate `index`."""
    if isinstance(expr, (Const, Param)):
        return ZERO
    if isinstance(expr, Coord):
        return ONE if expr.index == index else ZERO
    if isinstance(expr, Unary):
        u = expr.arg
        du = differentiate(u, index)
        if is_const(du, 0.0):
            return ZERO
        if expr.op == "neg":
            return neg(du)
        if expr.op == "exp":
            return mul(expr, du)
        if expr.op == "log":
            return div(du, u)
        if expr.op == "sin":
            return mul(Unary("cos", u), du)
        if expr.op == "cos":
            return neg(mul(Unary("sin", u), du))
        if expr.op == "sqrt":
            return div(du, mul(Const(2.0), expr))
        if expr.op == "recip":
            return neg(mul(du, power(expr, 2)))
        raise UnknownSymbolError(expr.op, operation="differentiate")
    if isinstance(expr, Binary):
        a, b = expr.left, expr.right
        da, db = differentiate(a, index), differentiate(b, index)
        if expr.op == "add":
            return add(da, db)
        if expr.op == "sub":
            return sub(da, db)
        if expr.op == "mul":
            return add(mul(da, b), mul(a, db))
        if expr.op == "div":
            return div(sub(mul(da, b), mul(a, db)), power(b, 2))
        raise UnknownSymbolError(expr.op, operation="differentiate")
    if isinstance(expr, Pow):
        du = differentiate(expr.base, index)
        return mul(mul(Const(float(expr.exponent)), power(expr.base, expr.exponent - 1)), du)
    raise TypeError(f"not an expression node: {expr!r}")


def substitute(expr: Expr, coordinates: Sequence[Expr]) -> Expr:
    """Replace every coordinate reference by the expression at its index."""
    if isinstance(expr, Coord):
        return coordinates[expr.index]
    if isinstance(expr, Unary):
        arg = substitute(expr.arg, coordinates)
        return neg(arg) if expr.op == "neg" else Unary(expr.op, arg)
    if isinstance(expr, Binary):
        left = substitute(expr.left, coordinates)
        right = substitute(expr.right, coordinates)
        return {"add": add, "sub": sub, "mul": mul, "div": div}[expr.op](left, right)
    if isinstance(expr, Pow):
        return power(substitute(expr.base, coordinates), expr.exponent)
    return expr


def evaluate_value(expr: Expr, point: Sequence[float], params: Dict[str, float]) -> float:
    """Plain floating-point evaluation with the same domain rules as the jets."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Coord):
        return float(point[expr.index])
    if isinstance(expr, Param):
        if expr.name not in params:
            raise UnknownSymbolError(expr.name, operation="evaluate_value")
        return float(params[expr.name])
    if isinstance(expr, Unary):
        v = evaluate_value(expr.arg, point, params)
        if expr.op == "neg":
            return -v
        if expr.op == "log":
            if v <= 0.0:
                raise DomainError("log of non-positive value", pretty(expr), "evaluate_value")
            return math.log(v)
        if expr.op == "sqrt":
            if v < 0.0:
                raise DomainError("sqrt of negative value", pretty(expr), "evaluate_value")
            return math.sqrt(v)
        if expr.op == "recip":
            if v == 0.0:
                raise DomainError("division by zero", pretty(expr), "evaluate_value")
            return 1.0 / v
        if expr.op == "exp":
            try:
                return math.exp(v)
            except OverflowError:
                raise DomainError("exp overflow", pretty(expr), "evaluate_value")
        return math.sin(v) if expr.op == "sin" else math.cos(v)
    if isinstance(expr, Binary):
        a = evaluate_value(expr.left, point, params)
        b = evaluate_value(expr.right, point, params)
        if expr.op == "add":
            return a + b
        if expr.op == "sub":
            return a - b
        if expr.op == "mul":
            return a * b
        if b == 0.0:
            raise DomainError("division by zero", pretty(expr), "evaluate_value")
        return a / b
    if isinstance(expr, Pow):
        v = evaluate_value(expr.base, point, params)
        if v == 0.0 and expr.exponent < 0:
            raise DomainError("division by zero", pretty(expr), "evaluate_value")
        return v**expr.exponent
    raise TypeError(f"not an expression node: {expr!r}")


# Printing ----------------------------------------------------------------


def format_number(value: float) -> str:
    """Shortest text that parses back to exactly `value` (non-negative part)."""
    if value == math.pi:
        return "pi"
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def _precedence(expr: Expr) -> int:
    if isinstance(expr, Const):
        return PREC_UNARY if expr.value < 0 else PREC_ATOM
    if isinstance(expr, Unary):
        return PREC_UNARY if expr.op == "neg" else PREC_ATOM
    if isinstance(expr, Binary):
        return PREC_ADD if expr.op in ("add", "sub") else PREC_MUL
    if isinstance(expr, Pow):
        return PREC_POW
    return PREC_ATOM


def _wrap(expr: Expr, minimum: int) -> str:
    text = pretty(expr)
    if _precedence(expr) < minimum:
        return f"({text})"
    return text


def pretty(expr: Expr) -> str:
    """Render an expression in the input grammar; parse(pretty(e)) == e for parsed trees."""
    if isinstance(expr, Const):
        if expr.value < 0:
            return "-" + format_number(-expr.value)
        return format_number(expr.value)
    if isinstance(expr, Coord):
        return expr.name
    if isinstance(expr, Param):
        return expr.name
    if isinstance(expr, Unary):
        if expr.op == "neg":
            return "-" + _wrap(expr.arg, PREC_UNARY)
        return f"{expr.op}({pretty(expr.arg)})"
    if isinstance(expr, Binary):
        if expr.op in ("add", "sub"):
            symbol = "+" if expr.op == "add" else "-"
            return f"{_wrap(expr.left, PREC_ADD)} {symbol} {_wrap(expr.right, PREC_MUL)}"
        symbol = "*" if expr.op == "mul" else "/"
        return f"{_wrap(expr.left, PREC_MUL)} {symbol} {_wrap(expr.right, PREC_UNARY)}"
    if isinstance(expr, Pow):
        return f"{_wrap(expr.base, PREC_ATOM)}^{expr.exponent}"
    raise TypeError(f"not an expression node: {expr!r}")
