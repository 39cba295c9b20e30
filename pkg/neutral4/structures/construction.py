"""Compatible structures built from a pair of orthogonal null vector fields.

All constructions are algebraic in the metric and the two fields, so they
are carried out on jets: the resulting endomorphism fields come with exact
first and second derivatives at every point they are evaluated at.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from neutral4.config import get_settings
from neutral4.errors import PreconditionError
from neutral4.geometry.jets import TensorJet, einsum, inverse, scalar_times, stack
from neutral4.geometry.operations import LocalGeometry
from neutral4.geometry.spec import GeometrySpec, VectorField
from neutral4.tensor.forms import twoform_from_endomorphism

logger = logging.getLogger(__name__)
settings = get_settings()

# J E1 = E2, J E3 = E4 in the adapted frame
ADAPTED_J = np.array(
    [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)
EIGEN_SPLIT = np.diag([1.0, 1.0, -1.0, -1.0])


class EndomorphismKind(str, Enum):
    COMPLEX = "complex"  # A^2 = -Id
    PRODUCT = "product"  # A^2 = +Id


@dataclass(frozen=True)
class EndomorphismField:
    """A (1,1)-tensor field given by the rule that builds its jet at a point."""

    name: str
    kind: EndomorphismKind
    build: Callable[[LocalGeometry], TensorJet] = field(compare=False, repr=False)
    components: Optional[Tuple] = field(default=None, compare=False, repr=False)

    def at(self, local: LocalGeometry) -> TensorJet:
        return local.cached(f"endomorphism:{self.name}:{id(self)}", lambda: self.build(local))

    def value_at(self, geom: GeometrySpec, p: Sequence[float]) -> np.ndarray:
        return self.at(LocalGeometry(geom, p)).value

    @classmethod
    def constant(cls, name: str, kind: EndomorphismKind, matrix) -> "EndomorphismField":
        values = np.asarray(matrix, dtype=float)
        return cls(name, kind, lambda local: TensorJet.constant(values))

    @classmethod
    def from_exprs(cls, name: str, kind: EndomorphismKind, rows) -> "EndomorphismField":
        rows = tuple(tuple(row) for row in rows)
        return cls(name, kind, lambda local: local.jet(rows), rows)

    def negated(self, name: Optional[str] = None) -> "EndomorphismField":
        return EndomorphismField(name or f"-{self.name}", self.kind, lambda local: -self.at(local))

    def then(self, other: "EndomorphismField", name: str, kind: EndomorphismKind) -> "EndomorphismField":
        """The composition ``self o other``."""
        return EndomorphismField(name, kind, lambda local: self.at(local) @ other.at(local))


@dataclass(frozen=True)
class NullCompletion:
    z: TensorJet
    t: TensorJet


def pairing(g: TensorJet, x: TensorJet, y: TensorJet) -> TensorJet:
    return einsum("i,i->", x, g @ y)


def null_pair_residuals(local: LocalGeometry, x: np.ndarray, y: np.ndarray) -> dict:
    """g(X,X), g(Y,Y), g(X,Y) and the normalized independence measure |X^Y|."""
    g = local.g.value
    wedge = np.outer(x, y) - np.outer(y, x)
    scale = max(float(np.linalg.norm(x) * np.linalg.norm(y)), 1e-300)
    return {
        "x_null": abs(float(x @ g @ x)),
        "y_null": abs(float(y @ g @ y)),
        "orthogonal": abs(float(x @ g @ y)),
        "independence": float(np.max(np.abs(wedge))) / scale,
    }


def require_null_pair(local: LocalGeometry, x: np.ndarray, y: np.ndarray, operation: str) -> None:
    residuals = null_pair_residuals(local, x, y)
    tol = settings.tol_first_derivative
    for key, message in (("x_null", "X not null"), ("y_null", "Y not null"), ("orthogonal", "X, Y not orthogonal")):
        if residuals[key] >= tol:
            raise PreconditionError(message, residuals[key], operation)
    if residuals["independence"] <= settings.independence_threshold:
        raise PreconditionError("X, Y not independent", residuals["independence"], operation)


def complete_null_pair_jet(
    local: LocalGeometry, x: TensorJet, y: TensorJet, jitter: Optional[Sequence[float]] = None
) -> NullCompletion:
    """
    Least-norm Z, T with g(X,Z) = g(Y,T) = 1 and g(X,T) = g(Y,Z) = 0.

    The optional jitter (s1, s2, s3, s4) adds s1 X + s2 Y to Z and s3 X + s4 Y
    to T, which keeps every pairing and produces another valid completion.
    """
    require_null_pair(local, x.value, y.value, "complete_null_pair")
    g = local.g
    rows = stack([g @ x, g @ y], axis=0)  # (2, 4): the covectors X_flat, Y_flat
    pinv = einsum("ai,ab->ib", rows, inverse(einsum("ai,bi->ab", rows, rows)))
    z, t = pinv[:, 0], pinv[:, 1]
    if jitter is not None:
        s1, s2, s3, s4 = jitter
        z = z + x.scale(s1) + y.scale(s2)
        t = t + x.scale(s3) + y.scale(s4)
    return NullCompletion(z, t)


def complete_null_pair(
    geom: GeometrySpec,
    X: VectorField,
    Y: VectorField,
    p: Sequence[float],
    jitter: Optional[Sequence[float]] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Complete two orthogonal null vectors to a pairing basis.

    Args:
        geom: Geometry
        X: Null field
        Y: Null field orthogonal to X and independent of it
        p: Point
        jitter: Optional shift to another valid completion

    Returns:
        (Z, T) with g(X,Z) = 1, g(X,T) = 0, g(Y,Z) = 0, g(Y,T) = 1

    Raises:
        PreconditionError: naming the failed condition and its residual
    """
    local = LocalGeometry(geom, p)
    completion = complete_null_pair_jet(local, local.vector(X), local.vector(Y), jitter)
    return completion.z.value, completion.t.value


@dataclass(frozen=True)
class AdaptedFrame:
    """E_1..E_4 as matrix columns, their complex structure and orientation."""

    vectors: TensorJet
    j: TensorJet
    orientation: int


def adapted_frame_jet(
    local: LocalGeometry, x: TensorJet, y: TensorJet, jitter: Optional[Sequence[float]] = None
) -> AdaptedFrame:
    """
    Orthonormal frame built from X, Y and their completion.

    With a = g(Z,Z), b = g(T,T), c = g(Z,T):
    E1 = (1-a)/2 X + Z, E2 = (1-b)/2 Y + T - cX,
    E3 = -(1+a)/2 X + Z, E4 = -(1+b)/2 Y + T - cX,
    so that X = E1 - E3 and Y = E2 - E4.
    """
    completion = complete_null_pair_jet(local, x, y, jitter)
    z, t, g = completion.z, completion.t, local.g
    order = min(z.order, g.order)
    half = TensorJet.constant(0.5, order)
    a, b, c = pairing(g, z, z), pairing(g, t, t), pairing(g, z, t)
    shift = t - scalar_times(c, x)
    e1 = scalar_times(half - a.scale(0.5), x) + z
    e2 = scalar_times(half - b.scale(0.5), y) + shift
    e3 = scalar_times(-(half + a.scale(0.5)), x) + z
    e4 = scalar_times(-(half + b.scale(0.5)), y) + shift
    vectors = stack([e1, e2, e3, e4], axis=-1)
    j = einsum("ij,jk->ik", vectors, TensorJet.constant(ADAPTED_J, order)) @ inverse(vectors)
    orientation = 1 if np.linalg.det(vectors.value) > 0 else -1
    return AdaptedFrame(vectors, j, orientation)


def construct_complex_structure(
    geom: GeometrySpec, X: VectorField, Y: VectorField, jitter: Optional[Sequence[float]] = None
) -> EndomorphismField:
    """
    The g-compatible almost complex structure J with JX = Y.

    J is evaluated lazily at each point through the adapted frame; it does
    not depend on the completion chosen for (Z, T).
    """
    name = f"J[{X.name},{Y.name}]" + ("" if jitter is None else f"~{tuple(jitter)}")

    def build(local: LocalGeometry) -> TensorJet:
        return adapted_frame_jet(local, local.vector(X), local.vector(Y), jitter).j

    return EndomorphismField(name, EndomorphismKind.COMPLEX, build)


def structure_orientation(geom: GeometrySpec, X: VectorField, Y: VectorField, p: Sequence[float]) -> int:
    local = LocalGeometry(geom, p)
    return adapted_frame_jet(local, local.vector(X), local.vector(Y)).orientation


def companion_jet(g: TensorJet, x: TensorJet, y: TensorJet, t: TensorJet) -> TensorJet:
    """U = X - g(T,T) Y + 2T."""
    return x - scalar_times(pairing(g, t, t), y) + t.scale(2.0)


def companion_null_field(
    geom: GeometrySpec, X: VectorField, Y: VectorField, p: Sequence[float]
) -> np.ndarray:
    """
    The null field U = X - bY + 2T at `p`, with b = g(T,T).

    Returns:
        U with g(U,U) = 0, g(X,U) = 0 and g(JX,U) = 2
    """
    local = LocalGeometry(geom, p)
    x, y = local.vector(X), local.vector(Y)
    completion = complete_null_pair_jet(local, x, y)
    return companion_jet(local.g, x, y, completion.t).value


def involution_jet(local: LocalGeometry, x: TensorJet, j: TensorJet) -> TensorJet:
    """S = +Id on span{X, U}, -Id on span{JX, JU}, with Y = JX."""
    y = j @ x
    completion = complete_null_pair_jet(local, x, y)
    u = companion_jet(local.g, x, y, completion.t)
    basis = stack([x, u, y, j @ u], axis=-1)
    split = TensorJet.constant(EIGEN_SPLIT, basis.order)
    return einsum("ij,jk->ik", basis, split) @ inverse(basis)


def construct_involution_S(geom: GeometrySpec, X: VectorField, J: EndomorphismField) -> EndomorphismField:
    """
    The g-skew involution S with SJ = -JS and SX = X.

    Args:
        geom: Geometry
        X: Null field
        J: Compatible almost complex structure

    Returns:
        Product-type EndomorphismField
    """

    def build(local: LocalGeometry) -> TensorJet:
        return involution_jet(local, local.vector(X), J.at(local))

    return EndomorphismField(f"S[{X.name}]", EndomorphismKind.PRODUCT, build)


def involution_nullity(g: np.ndarray, j: np.ndarray, x: np.ndarray, s: np.ndarray) -> Tuple[int, float]:
    """
    Uniqueness of S as a linear-algebra fact at one point.

    The unknown is vec(S) (index 4i + j). Rows encode g-skewness (16),
    anticommutation with J (16) and SX = X (4).

    Returns:
        (nullity of the homogeneous system, residual of `s` in the full system)
    """
    rows = []
    rhs = []
    for a in range(4):
        for b in range(4):
            row = np.zeros(16)
            for k in range(4):
                row[4 * k + a] += g[k, b]  # (S^T g)[a, b]
                row[4 * k + b] += g[a, k]  # (g S)[a, b]
            rows.append(row)
            rhs.append(0.0)
    for a in range(4):
        for b in range(4):
            row = np.zeros(16)
            for k in range(4):
                row[4 * a + k] += j[k, b]  # (SJ)[a, b]
                row[4 * k + b] += j[a, k]  # (JS)[a, b]
            rows.append(row)
            rhs.append(0.0)
    for a in range(4):
        row = np.zeros(16)
        for k in range(4):
            row[4 * a + k] = x[k]
        rows.append(row)
        rhs.append(x[a])
    matrix = np.array(rows)
    singular = np.linalg.svd(matrix, compute_uv=False)
    rank = int(np.sum(singular > settings.rank_relative_threshold * singular[0]))
    residual = float(np.max(np.abs(matrix @ s.reshape(16) - np.array(rhs))))
    return 16 - rank, residual


@dataclass(frozen=True)
class TripleAtPoint:
    i: TensorJet
    s: TensorJet
    t: TensorJet
    forms: Tuple[TensorJet, TensorJet, TensorJet]


@dataclass(frozen=True)
class StructureTriple:
    """Candidate (I, S, T) with T = IS on a geometry, and the null field X it was built from."""

    geometry: GeometrySpec
    I: EndomorphismField
    S: EndomorphismField
    T: EndomorphismField
    X: Optional[VectorField] = None
    Y: Optional[VectorField] = None

    def at(self, local: LocalGeometry) -> TripleAtPoint:
        i, s, t = self.I.at(local), self.S.at(local), self.T.at(local)
        return TripleAtPoint(i, s, t, fundamental_forms(local.g, (i, s, t)))

    def with_S(self, S: EndomorphismField) -> "StructureTriple":
        """Same I with a different S; T is rebuilt as IS."""
        T = self.I.then(S, f"{self.I.name}{S.name}", EndomorphismKind.PRODUCT)
        return StructureTriple(self.geometry, self.I, S, T, self.X, self.Y)


def fundamental_forms(g: TensorJet, endomorphisms) -> Tuple[TensorJet, ...]:
    """Omega_A(X, Y) = g(AX, Y) for each A."""
    return tuple(twoform_from_endomorphism(g, a) for a in endomorphisms)


def build_triple(geom: GeometrySpec, X: VectorField, Y: VectorField) -> StructureTriple:
    """
    The almost para-hypercomplex triple of a pair of orthogonal null fields.

    I is the complex structure with IX = Y, S the involution fixing X and
    T = IS. Whether the triple is integrable is decided by
    `verify_para_hyperhermitian`, not here.
    """
    I = construct_complex_structure(geom, X, Y)
    S = construct_involution_S(geom, X, I)
    T = I.then(S, f"T[{X.name}]", EndomorphismKind.PRODUCT)
    logger.debug(f"Built triple on '{geom.name}' from ({X.name}, {Y.name})")
    return StructureTriple(geom, I, S, T, X, Y)
