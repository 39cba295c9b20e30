"""Pointwise metric operations, Lie brackets and pullbacks."""

import logging
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from neutral4.config import get_settings
from neutral4.errors import BackendMismatchError, ImageOutOfDomainError, PreconditionError, SingularMetricError
from neutral4.exprdsl.expr import ZERO, Const, Expr, add, differentiate, evaluate_value, mul, sub
from neutral4.exprdsl.jet import evaluate_jet2
from neutral4.geometry.jets import TensorJet, contract, einsum, from_exprs, inverse
from neutral4.geometry.sampling import sample_points
from neutral4.geometry.spec import DIM, DiffeoMap, FormField, GeometrySpec, VectorField
from neutral4.schemas.report import Bound, CheckReport, ClauseResult, Tier

logger = logging.getLogger(__name__)
settings = get_settings()


class LocalGeometry:
    """
    Jets of the metric and derived quantities at one point.

    Every tensor operation in the toolkit works on a LocalGeometry so that
    the metric jet, its inverse and the connection are evaluated once per
    point and shared.
    """

    def __init__(self, geom: GeometrySpec, point: Sequence[float]):
        self.geom = geom
        self.point = np.asarray(point, dtype=float)
        self.params = geom.params
        self.C = geom.structure_constants
        self._cache: Dict[str, Any] = {}

    def cached(self, key: str, build: Callable[[], Any]) -> Any:
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @cached_property
    def g(self) -> TensorJet:
        return from_exprs(self.geom.metric, self.point, self.params, order=2)

    @cached_property
    def ginv(self) -> TensorJet:
        condition = float(np.linalg.cond(self.g.value))
        if not np.isfinite(condition) or condition > settings.singular_condition_limit:
            raise SingularMetricError(condition)
        return inverse(self.g)

    def jet(self, exprs, order: int = 2) -> TensorJet:
        return from_exprs(exprs, self.point, self.params, order=order)

    def vector(self, field: VectorField, order: int = 2) -> TensorJet:
        if field.backend != self.geom.backend:
            raise BackendMismatchError(
                f"field '{field.name}' belongs to the {field.backend.value} backend", "vector"
            )
        return self.jet(field.components, order)

    def form(self, form: FormField, order: int = 2) -> TensorJet:
        return self.jet(form.components, order)


# Metric ------------------------------------------------------------------


def metric_at(geom: GeometrySpec, p: Sequence[float]) -> np.ndarray:
    """Metric components at `p`; constant for the frame backend."""
    return np.array(
        [[evaluate_value(geom.metric[i][j], p, geom.params) for j in range(DIM)] for i in range(DIM)]
    )


def inverse_metric_at(geom: GeometrySpec, p: Sequence[float]) -> np.ndarray:
    """
    Inverse metric at `p`.

    Raises:
        SingularMetricError: condition number above `singular_condition_limit`
    """
    g = metric_at(geom, p)
    condition = float(np.linalg.cond(g))
    if not np.isfinite(condition) or condition > settings.singular_condition_limit:
        raise SingularMetricError(condition)
    inv = np.linalg.inv(g)
    return 0.5 * (inv + inv.T)


def signature_at(geom: GeometrySpec, p: Sequence[float]) -> Dict[str, float]:
    eigenvalues = np.linalg.eigvalsh(metric_at(geom, p))
    threshold = settings.signature_eigen_threshold
    return {
        "positive": int(np.sum(eigenvalues > threshold)),
        "negative": int(np.sum(eigenvalues < -threshold)),
        "min_abs_eigenvalue": float(np.min(np.abs(eigenvalues))),
    }


def signature_report(
    geom: GeometrySpec,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    mismatch = [abs(v["positive"] - 2) + abs(v["negative"] - 2) for v in values]
    seen = sorted({f"{int(v['positive'])},{int(v['negative'])}" for v in values})
    violating = [f"{int(v['positive'])},{int(v['negative'])}" for v, m in zip(values, mismatch) if m]
    clauses = [
        ClauseResult.from_residuals(
            "signature_2_2", Tier.EXACT, mismatch, tolerance=0.5, override=tol,
            note="|#positive - 2| + |#negative - 2| per point",
        ),
        ClauseResult.from_residuals(
            "eigenvalues_nonzero", Tier.EXACT, [v["min_abs_eigenvalue"] for v in values],
            tolerance=settings.signature_eigen_threshold, bound=Bound.LOWER,
        ),
    ]
    pinned = {"signature": violating[0] if violating else "2,2", "signatures_seen": seen}
    if violating:
        logger.info(f"{geom.name}: signature {violating[0]} at {len(violating)} point(s)")
    return CheckReport.assemble("signature", geom.name, points, clauses, seed=seed, pinned=pinned)


def check_signature(
    geom: GeometrySpec, samples: int, seed: Optional[int] = None, tol: Optional[float] = None
) -> CheckReport:
    """
    Count eigenvalue signs of the metric at seeded sample points.

    Args:
        geom: Geometry to check
        samples: Number of sample points
        seed: Sampling seed
        tol: Tolerance override

    Returns:
        CheckReport; a point fails unless it has two positive and two negative
        eigenvalues, each of magnitude above `signature_eigen_threshold`
    """
    sample = sample_points(geom, samples, seed)
    values = [signature_at(geom, p) for p in sample.points]
    return signature_report(geom, sample.points, values, sample.seed, tol)


# Lie brackets ------------------------------------------------------------


def _check_backend(geom: GeometrySpec, *fields: VectorField) -> None:
    for f in fields:
        if f.backend != geom.backend:
            raise BackendMismatchError(
                f"field '{f.name}' is a {f.backend.value} field, geometry '{geom.name}' "
                f"uses the {geom.backend.value} backend"
            )


def lie_bracket(geom: GeometrySpec, X: VectorField, Y: VectorField) -> VectorField:
    """
    Symbolic Lie bracket [X, Y].

    The coordinate backend differentiates the component expressions; the frame
    backend contracts with the structure constants. Frame components cannot
    depend on coordinates, so they contribute no derivative terms.

    Raises:
        BackendMismatchError: a field from the other backend
    """
    _check_backend(geom, X, Y)
    components: List[Expr] = []
    for k in range(DIM):
        term: Expr = ZERO
        if geom.is_frame:
            for i in range(DIM):
                for j in range(DIM):
                    c = geom.structure_constants[k, i, j]
                    if c != 0.0:
                        term = add(term, mul(Const(c), mul(X.components[i], Y.components[j])))
        else:
            for i in range(DIM):
                term = add(
                    term,
                    sub(
                        mul(X.components[i], differentiate(Y.components[k], i)),
                        mul(Y.components[i], differentiate(X.components[k], i)),
                    ),
                )
        components.append(term)
    return VectorField(f"[{X.name},{Y.name}]", tuple(components), geom.backend)


def bracket_jet(V: TensorJet, W: TensorJet, C: np.ndarray) -> TensorJet:
    """[V, W]^k = V^m e_m(W^k) - W^m e_m(V^k) + C^k_mn V^m W^n, one order lower than the inputs."""
    flow = einsum("m,km->k", V, W.grad()) - einsum("m,km->k", W, V.grad())
    return flow + einsum("kn,n->k", contract("m,kmn->kn", V, C), W)


def bracket_at(geom: GeometrySpec, X: VectorField, Y: VectorField, p: Sequence[float]) -> np.ndarray:
    _check_backend(geom, X, Y)
    local = LocalGeometry(geom, p)
    return bracket_jet(local.vector(X, 1), local.vector(Y, 1), local.C).value


# Pullbacks ---------------------------------------------------------------


def map_jacobian(
    geom: GeometrySpec, phi: DiffeoMap, p: Sequence[float]
) -> Tuple[np.ndarray, np.ndarray]:
    """Image point and Jacobian J[k, i] = d phi^k / d x^i."""
    if geom.is_frame:
        raise BackendMismatchError("pullbacks need the coordinate backend", "pullback_metric")
    jets = [evaluate_jet2(c, p, geom.params) for c in phi.components]
    image = np.array([j.value for j in jets])
    jacobian = np.array([j.gradient for j in jets])
    det = float(np.linalg.det(jacobian))
    if abs(det) <= settings.jacobian_det_threshold:
        raise PreconditionError(f"Jacobian of '{phi.name}' is singular", abs(det), "pullback_metric")
    if not geom.contains(image):
        raise ImageOutOfDomainError(np.array2string(image, precision=6))
    return image, jacobian


def pullback_metric(geom: GeometrySpec, phi: DiffeoMap, p: Sequence[float]) -> np.ndarray:
    """
    (phi* g)_ij(p) = g_kl(phi(p)) d_i phi^k d_j phi^l.

    Raises:
        ImageOutOfDomainError: phi(p) leaves the domain box
    """
    image, jac = map_jacobian(geom, phi, p)
    return jac.T @ metric_at(geom, image) @ jac


def pullback_oneform(
    geom: GeometrySpec, form: FormField, phi: DiffeoMap, p: Sequence[float]
) -> np.ndarray:
    image, jac = map_jacobian(geom, phi, p)
    values = np.array([evaluate_value(c, image, geom.params) for c in form.components])
    return values @ jac


def pullback_twoform(
    geom: GeometrySpec, form: FormField, phi: DiffeoMap, p: Sequence[float]
) -> np.ndarray:
    image, jac = map_jacobian(geom, phi, p)
    values = np.array(
        [[evaluate_value(c, image, geom.params) for c in row] for row in form.components]
    )
    return jac.T @ values @ jac


def form_at(geom: GeometrySpec, form: FormField, p: Sequence[float]) -> np.ndarray:
    if form.degree == 1:
        return np.array([evaluate_value(c, p, geom.params) for c in form.components])
    return np.array([[evaluate_value(c, p, geom.params) for c in row] for row in form.components])
