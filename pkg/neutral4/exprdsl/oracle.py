"""Finite-difference oracle for the exact jets of `evaluate_jet2`.

Gradients are compared with central differences of the plain value and
Hessians with central differences of the exact gradient; both difference
quotients are Richardson-extrapolated from two step sizes, which removes the
h^2 error term.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from neutral4.config import get_settings
from neutral4.exprdsl.expr import Expr, depends_on_coordinates, evaluate_value, pretty
from neutral4.exprdsl.jet import DIM, evaluate_jet2
from neutral4.geometry.spec import GeometrySpec

logger = logging.getLogger(__name__)
settings = get_settings()


def central_difference(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, h: float) -> np.ndarray:
    """Column k is (f(x + h e_k) - f(x - h e_k)) / 2h."""
    columns = []
    for k in range(DIM):
        step = np.zeros(DIM)
        step[k] = h
        columns.append((np.asarray(f(x + step)) - np.asarray(f(x - step))) / (2.0 * h))
    return np.stack(columns, axis=-1)


def richardson(coarse: np.ndarray, fine: np.ndarray, h_coarse: float, h_fine: float) -> np.ndarray:
    """(h1^2 D(h2) - h2^2 D(h1)) / (h1^2 - h2^2) for second-order quotients D."""
    a, b = h_coarse**2, h_fine**2
    return (a * fine - b * coarse) / (a - b)


def _relative(exact: np.ndarray, approx: np.ndarray) -> float:
    return float(np.max(np.abs(exact - approx))) / max(1.0, float(np.max(np.abs(exact))))


def oracle_residuals(
    expr: Expr,
    point: Sequence[float],
    params: Dict[str, float],
    steps: Optional[Tuple[float, float]] = None,
) -> Tuple[float, float]:
    """
    Relative errors of the exact gradient and Hessian of `expr` at `point`.

    Args:
        expr: Expression
        point: Chart point
        params: Parameter bindings
        steps: (coarse, fine) step sizes; defaults come from the settings

    Returns:
        (gradient error, Hessian error), each max |exact - extrapolated| / max(1, max |exact|)
    """
    h1, h2 = steps or (settings.ad_oracle_step_coarse, settings.ad_oracle_step_fine)
    x = np.asarray(point, dtype=float)
    jet = evaluate_jet2(expr, x, params)

    def value(y: np.ndarray) -> float:
        return evaluate_value(expr, y, params)

    def gradient(y: np.ndarray) -> np.ndarray:
        return evaluate_jet2(expr, y, params).gradient

    grad = richardson(central_difference(value, x, h1), central_difference(value, x, h2), h1, h2)
    hess = richardson(central_difference(gradient, x, h1), central_difference(gradient, x, h2), h1, h2)
    return _relative(jet.gradient, grad), _relative(jet.hessian, hess)


def shipped_expressions(geom: GeometrySpec) -> List[Tuple[str, Expr]]:
    """
    Every coordinate-dependent expression a geometry carries, labelled and deduplicated.

    Covers the metric (upper triangle), declared fields and declared forms.
    """
    doc = geom.document
    found: List[Tuple[str, Expr]] = []
    for i in range(DIM):
        for j in range(i, DIM):
            found.append((f"g[{i}][{j}]", geom.metric[i][j]))
    for decl in doc.fields:
        found.extend((f"{decl.name}[{k}]", c) for k, c in enumerate(decl.components))
    for form in doc.forms:
        if form.degree == 1:
            found.extend((f"{form.name}[{k}]", c) for k, c in enumerate(form.components))
        else:
            found.extend(
                (f"{form.name}[{i}][{j}]", form.components[i][j]) for i in range(DIM) for j in range(i + 1, DIM)
            )
    seen = set()
    unique = []
    for label, expr in found:
        text = pretty(expr)
        if text in seen or not depends_on_coordinates(expr):
            continue
        seen.add(text)
        unique.append((label, expr))
    return unique


def ad_oracle_at(
    geom: GeometrySpec, expressions: Sequence[Tuple[str, Expr]], p: Sequence[float]
) -> Dict[str, float]:
    gradient_error, hessian_error = 0.0, 0.0
    for label, expr in expressions:
        g_err, h_err = oracle_residuals(expr, p, geom.params)
        if max(g_err, h_err) > settings.ad_oracle_relative_tol:
            logger.debug(f"{geom.name}: oracle mismatch on {label} = {pretty(expr)} ({g_err:.3e}, {h_err:.3e})")
        gradient_error = max(gradient_error, g_err)
        hessian_error = max(hessian_error, h_err)
    return {"gradient": gradient_error, "hessian": hessian_error}
