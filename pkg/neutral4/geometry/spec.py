"""Resolved geometries and the symbolic objects that live on them."""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from neutral4.config import get_settings
from neutral4.errors import DocumentError, SpecResolutionError
from neutral4.exprdsl.document import Backend, GeometryDocument
from neutral4.exprdsl.expr import ZERO, Const, Expr, add, as_expr, mul, substitute

logger = logging.getLogger(__name__)

DIM = 4

ExprMatrix = Tuple[Tuple[Expr, ...], ...]


@dataclass(frozen=True)
class VectorField:
    """Components along the chart basis (coordinate backend) or the invariant frame."""

    name: str
    components: Tuple[Expr, ...]
    backend: Backend = Backend.COORDINATE

    def __post_init__(self) -> None:
        if len(self.components) != DIM:
            raise DocumentError(
                f"vector field '{self.name}' needs {DIM} components", operation="VectorField"
            )

    @classmethod
    def constant(cls, name: str, values: Sequence[float], backend: Backend) -> "VectorField":
        return cls(name, tuple(Const(float(v)) for v in values), backend)

    def combine(self, coef: float, other: "VectorField", name: str = "") -> "VectorField":
        """``self + coef * other``."""
        components = tuple(add(a, mul(Const(coef), b)) for a, b in zip(self.components, other.components))
        return VectorField(name or f"{self.name}+{coef}*{other.name}", components, self.backend)


@dataclass(frozen=True)
class FormField:
    """A 1-form (four components) or a 2-form (antisymmetric 4x4 components)."""

    name: str
    degree: int
    components: Tuple


@dataclass(frozen=True)
class DiffeoMap:
    """A map of the chart given by four coordinate expressions of the source point."""

    name: str
    components: Tuple[Expr, ...]

    def compose(self, inner: "DiffeoMap") -> "DiffeoMap":
        """``self`` after ``inner``."""
        return DiffeoMap(
            f"{self.name}o{inner.name}",
            tuple(substitute(c, inner.components) for c in self.components),
        )


@dataclass(frozen=True, eq=False)
class GeometrySpec:
    """A document with parameters bound, a concrete domain box and structure constants."""

    name: str
    document: GeometryDocument
    metric: ExprMatrix
    params: Dict[str, float]
    domain: Tuple[Tuple[float, float], ...]
    structure_constants: np.ndarray = field(repr=False)

    @property
    def backend(self) -> Backend:
        return self.document.backend

    @property
    def is_frame(self) -> bool:
        return self.document.is_frame

    @property
    def names(self) -> Tuple[str, ...]:
        return self.document.names

    def field(self, name: str) -> VectorField:
        if self.is_frame and name in self.names:
            k = self.names.index(name)
            return VectorField.constant(name, np.eye(DIM)[k], self.backend)
        try:
            decl = self.document.field(name)
        except KeyError:
            raise SpecResolutionError(f"geometry '{self.name}' has no field '{name}'") from None
        return VectorField(name, decl.components, self.backend)

    def form(self, name: str) -> FormField:
        try:
            decl = self.document.form(name)
        except KeyError:
            raise SpecResolutionError(f"geometry '{self.name}' has no form '{name}'") from None
        return FormField(name, decl.degree, decl.components)

    def basis_fields(self) -> Tuple[VectorField, ...]:
        return tuple(
            VectorField.constant(self.names[k], np.eye(DIM)[k], self.backend) for k in range(DIM)
        )

    def with_metric(self, metric: ExprMatrix, name: Optional[str] = None) -> "GeometrySpec":
        """Same chart, parameters and brackets with a different metric."""
        return replace(self, metric=metric, name=name or self.name)

    def contains(self, point: Sequence[float]) -> bool:
        return all(lo < x < hi for x, (lo, hi) in zip(point, self.domain))


def structure_constants(doc: GeometryDocument) -> np.ndarray:
    """C[k, a, b] with [e_a, e_b] = C^k_ab e_k; zero for the coordinate backend."""
    c = np.zeros((DIM, DIM, DIM))
    if not doc.is_frame:
        return c
    for bracket in doc.brackets:
        a, b = doc.names.index(bracket.left), doc.names.index(bracket.right)
        for coef, target in bracket.terms:
            k = doc.names.index(target)
            c[k, a, b] += coef
            c[k, b, a] -= coef
    return c


def jacobi_defect(c: np.ndarray) -> float:
    """max |[[e_a,e_b],e_c] + [[e_b,e_c],e_a] + [[e_c,e_a],e_b]|."""
    term = np.einsum("mab,nmc->nabc", c, c)
    cyclic = term + term.transpose(0, 2, 3, 1) + term.transpose(0, 3, 1, 2)
    return float(np.max(np.abs(cyclic)))


def check_jacobi(c: np.ndarray, tol: Optional[float] = None) -> None:
    tol = get_settings().tol_exact if tol is None else tol
    defect = jacobi_defect(c)
    if defect >= tol:
        raise DocumentError(
            f"structure constants violate the Jacobi identity (defect {defect:.3e})",
            operation="resolve_geometry",
        )


def resolve_geometry(
    doc: GeometryDocument, overrides: Optional[Mapping[str, float]] = None
) -> GeometrySpec:
    """
    Bind parameters and complete the domain box of a parsed document.

    Args:
        doc: Parsed geometry document
        overrides: Parameter values replacing the document defaults

    Returns:
        GeometrySpec ready for pointwise evaluation

    Raises:
        SpecResolutionError: an override names an undeclared parameter
        DocumentError: the frame brackets violate the Jacobi identity
    """
    settings = get_settings()
    params = doc.param_defaults()
    for name, value in (overrides or {}).items():
        if name not in params:
            raise SpecResolutionError(f"geometry '{doc.name}' has no parameter '{name}'")
        params[name] = float(value)

    box = {d.name: (d.low, d.high) for d in doc.domain}
    default = (settings.domain_default_low, settings.domain_default_high)
    domain = tuple(box.get(name, default) for name in doc.names)

    c = structure_constants(doc)
    check_jacobi(c)
    logger.debug(f"Resolved geometry '{doc.name}' with params {params}")
    return GeometrySpec(doc.name, doc, doc.metric, params, domain, c)


def metric_from_coframe(coframe: Sequence[Sequence[Expr]], gram) -> ExprMatrix:
    """Chart metric g_ij = sum_ab G_ab theta^a_i theta^b_j for coframe rows theta^a."""
    rows = [[as_expr(x) for x in row] for row in coframe]
    g = [[as_expr(x) for x in row] for row in gram]
    metric = [[ZERO] * DIM for _ in range(DIM)]
    for i in range(DIM):
        for j in range(i, DIM):
            entry: Expr = ZERO
            for a in range(DIM):
                for b in range(DIM):
                    entry = add(entry, mul(g[a][b], mul(rows[a][i], rows[b][j])))
            metric[i][j] = metric[j][i] = entry
    return tuple(tuple(row) for row in metric)
