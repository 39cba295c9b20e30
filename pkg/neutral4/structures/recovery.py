"""Recovering (I, S, T, g) from three fundamental 2-forms.

The relations Omega_3(IX,Y) = Omega_2(X,Y), Omega_1(SX,Y) = Omega_3(X,Y),
Omega_2(TX,Y) = -Omega_1(X,Y) and g(X,Y) = Omega_1(X,IY) give, for the
component matrices F_l:

    I = F_3^-1 F_2,   S = F_1^-1 F_3,   T = -F_2^-1 F_1,   g = F_1 I.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from neutral4.config import get_settings
from neutral4.errors import AdmissibilityError, Neutral4Error
from neutral4.exprdsl.expr import ZERO, Const, Expr, add, mul
from neutral4.geometry.jets import TensorJet, inverse
from neutral4.geometry.operations import LocalGeometry, form_at
from neutral4.geometry.sampling import sample_points
from neutral4.geometry.spec import DIM, FormField, GeometrySpec
from neutral4.structures.construction import EndomorphismField, EndomorphismKind, StructureTriple
from neutral4.tensor.forms import wedge22

logger = logging.getLogger(__name__)
settings = get_settings()


@dataclass(frozen=True)
class FormTriple:
    """Three 2-form fields meant as Omega_1, Omega_2, Omega_3."""

    omega1: FormField
    omega2: FormField
    omega3: FormField

    def __iter__(self):
        return iter((self.omega1, self.omega2, self.omega3))


@dataclass(frozen=True)
class RecoveredStructure:
    i: np.ndarray
    s: np.ndarray
    t: np.ndarray
    g: np.ndarray


def _sup(array) -> float:
    return float(np.max(np.abs(array)))


def _admissibility(f1: np.ndarray, f2: np.ndarray, f3: np.ndarray) -> list:
    squares = [wedge22(f, f) for f in (f1, f2, f3)]
    scale = max(1.0, abs(squares[1]))
    return [
        ("Omega_2 nondegenerate", abs(squares[1]), False),
        ("-Omega_1^2 = Omega_2^2", abs(squares[0] + squares[1]) / scale, True),
        ("Omega_2^2 = Omega_3^2", abs(squares[1] - squares[2]) / scale, True),
        (
            "Omega_l ^ Omega_m = 0",
            max(abs(wedge22(f1, f2)), abs(wedge22(f1, f3)), abs(wedge22(f2, f3))) / scale,
            True,
        ),
    ]


def recover_structure_from_forms(
    f1: np.ndarray, f2: np.ndarray, f3: np.ndarray, tol: Optional[float] = None
) -> RecoveredStructure:
    """
    Recover the endomorphisms and the metric from three 2-forms at one point.

    Args:
        f1: Components of Omega_1
        f2: Components of Omega_2
        f3: Components of Omega_3
        tol: Tolerance for the form relations (curvature tier by default)

    Returns:
        RecoveredStructure satisfying the para-hyperhermitian algebra

    Raises:
        AdmissibilityError: the forms violate one of the required relations
    """
    tol = settings.tol_curvature if tol is None else tol
    operation = "recover_structure_from_forms"
    for relation, residual, upper in _admissibility(f1, f2, f3):
        if upper and residual >= tol:
            raise AdmissibilityError(relation, residual, operation)
        if not upper and residual <= settings.signature_eigen_threshold:
            raise AdmissibilityError(relation, residual, operation)
    i = np.linalg.solve(f3, f2)
    s = np.linalg.solve(f1, f3)
    t = -np.linalg.solve(f2, f1)
    g = f1 @ i
    g = 0.5 * (g + g.T)
    for relation, residual in (
        ("I^2 = -Id", _sup(i @ i + np.eye(DIM))),
        ("S^2 = Id", _sup(s @ s - np.eye(DIM))),
        ("T = IS", _sup(t - i @ s)),
    ):
        if residual >= tol:
            raise AdmissibilityError(relation, residual, operation)
    return RecoveredStructure(i, s, t, g)


def recover_structure_at(geom: GeometrySpec, forms: FormTriple, p: Sequence[float]) -> RecoveredStructure:
    return recover_structure_from_forms(*(form_at(geom, f, p) for f in forms))


def structure_from_forms(geom: GeometrySpec, forms: FormTriple, name: str = "") -> StructureTriple:
    """
    The triple whose fundamental forms are the given ones.

    The endomorphisms are recovered on jets, so Nijenhuis tensors and Lee
    forms of the result are exact. `geom` must carry the metric F_1 I.
    """
    label = name or forms.omega1.name

    def jets(local: LocalGeometry) -> Tuple[TensorJet, TensorJet, TensorJet]:
        return local.cached(
            f"forms:{label}", lambda: tuple(local.form(f) for f in forms)  # type: ignore[arg-type]
        )

    def build_i(local: LocalGeometry) -> TensorJet:
        f1, f2, f3 = jets(local)
        return inverse(f3) @ f2

    def build_s(local: LocalGeometry) -> TensorJet:
        f1, f2, f3 = jets(local)
        return inverse(f1) @ f3

    def build_t(local: LocalGeometry) -> TensorJet:
        f1, f2, f3 = jets(local)
        return -(inverse(f2) @ f1)

    return StructureTriple(
        geom,
        EndomorphismField(f"I[{label}]", EndomorphismKind.COMPLEX, build_i),
        EndomorphismField(f"S[{label}]", EndomorphismKind.PRODUCT, build_s),
        EndomorphismField(f"T[{label}]", EndomorphismKind.PRODUCT, build_t),
    )


def metric_from_form_and_structure(omega: FormField, I: EndomorphismField) -> Tuple[Tuple[Expr, ...], ...]:
    """Symbolic g = (Omega I + (Omega I)^T) / 2 for an I given by expressions."""
    if I.components is None:
        raise Neutral4Error(f"'{I.name}' has no expression components", "build_from_omega_pair")
    entries = [[ZERO] * DIM for _ in range(DIM)]
    for a in range(DIM):
        for b in range(a, DIM):
            total: Expr = ZERO
            for k in range(DIM):
                total = add(total, mul(omega.components[a][k], I.components[k][b]))
                total = add(total, mul(omega.components[b][k], I.components[k][a]))
            entries[a][b] = entries[b][a] = mul(Const(0.5), total)
    return tuple(tuple(row) for row in entries)


def omega_pair_residuals(
    real: np.ndarray, imaginary: np.ndarray, omega: np.ndarray, i: np.ndarray
) -> dict:
    square = wedge22(omega, omega)
    scale = max(1.0, abs(square))
    return {
        "omega nondegenerate": abs(square),
        "Omega ^ conj(Omega) = -2 omega^2": abs(
            wedge22(real, real) + wedge22(imaginary, imaginary) + 2.0 * square
        )
        / scale,
        "Omega ^ omega = 0": max(abs(wedge22(real, omega)), abs(wedge22(imaginary, omega))) / scale,
        "omega is of type (1,1)": _sup(i.T @ omega @ i - omega),
        "Omega is of type (2,0)": _sup(real - imaginary @ i),
    }


def build_from_omega_pair(
    geom: GeometrySpec,
    I: EndomorphismField,
    Omega: Tuple[FormField, FormField],
    omega: FormField,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> StructureTriple:
    """
    Build a triple from a (2,0)-form Omega and a real 2-form omega.

    Omega_1 = omega, Omega_2 = Re Omega, Omega_3 = Im Omega. The identities are
    checked at seeded sample points before the triple is built; the metric
    of the returned triple's geometry is omega(., I.).

    Args:
        geom: Geometry carrying the forms
        I: Complex structure with expression components
        Omega: (Re Omega, Im Omega)
        omega: Real 2-form
        samples: Number of sample points for the admissibility checks
        seed: Sampling seed

    Returns:
        StructureTriple on `geom` with the recovered metric

    Raises:
        AdmissibilityError: citing the violated identity
    """
    tol = settings.tol_curvature
    operation = "build_from_omega_pair"
    real, imaginary = Omega
    sample = sample_points(geom, samples or settings.default_samples, 0 if seed is None else seed)
    for p in sample.points:
        local = LocalGeometry(geom, p)
        i = I.at(local).value
        residuals = omega_pair_residuals(
            form_at(geom, real, p), form_at(geom, imaginary, p), form_at(geom, omega, p), i
        )
        for relation, residual in residuals.items():
            if relation == "omega nondegenerate":
                if residual <= settings.signature_eigen_threshold:
                    raise AdmissibilityError(relation, residual, operation)
            elif residual >= tol:
                raise AdmissibilityError(relation, residual, operation)

    target = geom.with_metric(metric_from_form_and_structure(omega, I), name=f"{geom.name}[{omega.name}]")
    triple = structure_from_forms(target, FormTriple(omega, real, imaginary), name=omega.name)
    for p in sample.points[: min(10, len(sample.points))]:
        local = LocalGeometry(target, p)
        mismatch = _sup(triple.I.at(local).value - I.at(local).value)
        if mismatch >= tol:
            raise AdmissibilityError("recovered I equals the given I", mismatch, operation)
    logger.debug(f"Built triple from ({real.name}, {imaginary.name}, {omega.name}) on '{geom.name}'")
    return StructureTriple(target, I, triple.S, triple.T, None, None)
