"""Nijenhuis tensors, Lie derivatives of endomorphisms, Lee forms and the para-hyperhermitian check."""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from neutral4.config import get_settings
from neutral4.geometry.jets import TensorJet, inverse
from neutral4.geometry.operations import LocalGeometry
from neutral4.geometry.sampling import sample_points
from neutral4.geometry.spec import GeometrySpec, VectorField
from neutral4.schemas.report import CheckReport, ClauseResult, Tier
from neutral4.structures.construction import EndomorphismField, StructureTriple
from neutral4.tensor.forms import (
    codifferential_jet,
    exterior_derivative_1,
    exterior_derivative_2,
    wedge12,
    wedge22,
)

logger = logging.getLogger(__name__)
settings = get_settings()

IDENTITY = np.eye(4)


def _sup(array) -> float:
    return float(np.max(np.abs(array)))


def nijenhuis_jet(a: TensorJet, c: np.ndarray) -> np.ndarray:
    """
    N[k, a, b]: the e_k component of N_A(e_a, e_b).

    N_A(X,Y) = A^2[X,Y] + [AX,AY] - A[AX,Y] - A[X,AY], expanded on the basis
    with A.d[k, a, m] = e_m A^k_a.
    """
    m, dm = a.value, a.d
    bracket_aa = (
        np.einsum("ma,kbm->kab", m, dm)
        - np.einsum("mb,kam->kab", m, dm)
        + np.einsum("kmn,ma,nb->kab", c, m, m)
    )
    bracket_ae = -dm + np.einsum("kmb,ma->kab", c, m)  # [A e_a, e_b]
    bracket_ea = dm.transpose(0, 2, 1) + np.einsum("kan,nb->kab", c, m)  # [e_a, A e_b]
    return (
        np.einsum("km,mab->kab", m @ m, c)
        + bracket_aa
        - np.einsum("km,mab->kab", m, bracket_ae)
        - np.einsum("km,mab->kab", m, bracket_ea)
    )


def nijenhuis(geom: GeometrySpec, A: EndomorphismField, p: Sequence[float]) -> np.ndarray:
    """
    Nijenhuis tensor of an endomorphism field at a point.

    Args:
        geom: Geometry
        A: Endomorphism field
        p: Point

    Returns:
        Array N[k, a, b], antisymmetric in (a, b), evaluated on chart (or frame) basis pairs
    """
    local = LocalGeometry(geom, p)
    return nijenhuis_jet(A.at(local), local.C)


def lie_derivative_jet(k: TensorJet, a: TensorJet, c: np.ndarray) -> np.ndarray:
    """(L_K A)(e_a) = [K, A e_a] - A [K, e_a], as a matrix of columns."""
    m, dm, dk = a.value, a.d, k.d
    bracket_ka = (
        np.einsum("m,kam->ka", k.value, dm)
        - np.einsum("ma,km->ka", m, dk)
        + np.einsum("kmn,m,na->ka", c, k.value, m)
    )
    bracket_ke = -dk + np.einsum("kma,m->ka", c, k.value)
    return bracket_ka - m @ bracket_ke


def lie_derivative_endomorphism(
    geom: GeometrySpec, K: VectorField, A: EndomorphismField, p: Sequence[float]
) -> np.ndarray:
    """L_K A at `p`; zero when the flow of K preserves A."""
    local = LocalGeometry(geom, p)
    return lie_derivative_jet(local.vector(K, order=1), A.at(local), local.C)


def lee_form_jet(local: LocalGeometry, omega: TensorJet, a: TensorJet) -> TensorJet:
    """theta_A = delta(Omega_A) o A^-1, so that d Omega_A = theta_A ^ Omega_A in dimension 4."""
    return codifferential_jet(local, omega) @ inverse(a).truncate(1)


def lee_forms(
    geom: GeometrySpec, triple: StructureTriple, p: Sequence[float]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Lee forms of the three fundamental forms.

    theta_1 = -delta(Omega_1) o I, theta_2 = delta(Omega_2) o S, theta_3 = delta(Omega_3) o T.
    For integrable triples the three coincide.
    """
    local = LocalGeometry(geom, p)
    point = triple.at(local)
    thetas = [
        lee_form_jet(local, omega, a).value
        for omega, a in zip(point.forms, (point.i, point.s, point.t))
    ]
    return thetas[0], thetas[1], thetas[2]


def lee_form_differential(geom: GeometrySpec, triple: StructureTriple, p: Sequence[float]) -> np.ndarray:
    """d theta_1 at `p`."""
    local = LocalGeometry(geom, p)
    point = triple.at(local)
    return exterior_derivative_1(lee_form_jet(local, point.forms[0], point.i), local.C)


# Para-hyperhermitian report ------------------------------------------------


def form_identities(forms: Sequence[np.ndarray]) -> Dict[str, float]:
    """-Omega_1^2 = Omega_2^2 = Omega_3^2 and Omega_l ^ Omega_m = 0 for l != m, relative to Omega_2^2."""
    o1, o2, o3 = forms
    squares = [wedge22(o1, o1), wedge22(o2, o2), wedge22(o3, o3)]
    scale = max(1.0, abs(squares[1]))
    return {
        "squares": max(abs(-squares[0] - squares[1]), abs(squares[1] - squares[2])) / scale,
        "mixed": max(abs(wedge22(o1, o2)), abs(wedge22(o1, o3)), abs(wedge22(o2, o3))) / scale,
        "volume": abs(squares[1]),
    }


def para_hyperhermitian_at(triple: StructureTriple, p: Sequence[float]) -> Dict[str, float]:
    """Every residual of the para-hyperhermitian check at one point."""
    geom = triple.geometry
    local = LocalGeometry(geom, p)
    point = triple.at(local)
    g = local.g.value
    i, s, t = point.i.value, point.s.value, point.t.value
    forms = [f.value for f in point.forms]
    identities = form_identities(forms)

    values: Dict[str, float] = {
        "i_square": _sup(i @ i + IDENTITY),
        "s_square": _sup(s @ s - IDENTITY),
        "t_is_product": _sup(t - i @ s),
        "anticommute": _sup(i @ s + s @ i),
        "skew": max(_sup(a.T @ g + g @ a) for a in (i, s, t)),
        "form_squares": identities["squares"],
        "form_mixed": identities["mixed"],
        "type_2_0": _sup(forms[1] - forms[2] @ i),
    }
    if triple.X is not None:
        x = local.vector(triple.X, order=0).value
        values["s_fixes_x"] = _sup(s @ x - x) / max(1.0, _sup(x))
    for label, a in zip("IST", (point.i, point.s, point.t)):
        values[f"nijenhuis_{label}"] = _sup(nijenhuis_jet(a, local.C))

    thetas = [
        lee_form_jet(local, omega, a)
        for omega, a in zip(point.forms, (point.i, point.s, point.t))
    ]
    values["lee_equal"] = max(_sup(thetas[0].value - thetas[1].value), _sup(thetas[0].value - thetas[2].value))
    values["d_omega"] = max(
        _sup(exterior_derivative_2(omega, local.C) - wedge12(theta.value, omega.value))
        for omega, theta in zip(point.forms, thetas)
    )
    values["lee_norm"] = _sup(thetas[0].value)
    return values


_CLAUSES: List[Tuple[str, str, Tier, str]] = [
    ("i_square", "i_square", Tier.ALGEBRAIC, "I^2 = -Id"),
    ("s_square", "s_square", Tier.ALGEBRAIC, "S^2 = Id"),
    ("t_is_product", "t_is_product", Tier.ALGEBRAIC, "T = IS"),
    ("anticommute", "anticommute", Tier.ALGEBRAIC, "IS = -SI"),
    ("skew", "skew", Tier.ALGEBRAIC, "g(AX,Y) + g(X,AY) = 0 for A = I, S, T"),
    ("s_fixes_x", "s_fixes_x", Tier.FIRST_DERIVATIVE, "SX = X"),
    ("form_squares", "form_squares", Tier.FIRST_DERIVATIVE, "-Omega_1^2 = Omega_2^2 = Omega_3^2"),
    ("form_mixed", "form_mixed", Tier.FIRST_DERIVATIVE, "Omega_l ^ Omega_m = 0"),
    ("type_2_0", "type_2_0", Tier.FIRST_DERIVATIVE, "Omega_2(X,Y) = Omega_3(X,IY)"),
    ("nijenhuis_I", "nijenhuis_I", Tier.FIRST_DERIVATIVE, "N_I = 0"),
    ("nijenhuis_S", "nijenhuis_S", Tier.FIRST_DERIVATIVE, "N_S = 0"),
    ("nijenhuis_T", "nijenhuis_T", Tier.FIRST_DERIVATIVE, "N_T = 0"),
    ("lee_equal", "lee_equal", Tier.FIRST_DERIVATIVE, "theta_1 = theta_2 = theta_3"),
    ("d_omega", "d_omega", Tier.CURVATURE, "d Omega_l = theta ^ Omega_l"),
]


def para_hyperhermitian_report(
    triple: StructureTriple,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    clauses = []
    for name, key, tier, note in _CLAUSES:
        if key not in values[0]:
            clauses.append(ClauseResult.not_applicable(name, tier, "triple has no distinguished X", tol))
            continue
        clauses.append(
            ClauseResult.from_residuals(name, tier, [v[key] for v in values], note=note, override=tol)
        )
    lee = [v["lee_norm"] for v in values]
    pinned = {
        "I": triple.I.name,
        "S": triple.S.name,
        "lee_norm_max": max(lee),
        "para_hyperkahler": max(lee) < settings.tol_first_derivative,
        "nijenhuis_max": {label: max(v[f"nijenhuis_{label}"] for v in values) for label in "IST"},
    }
    report = CheckReport.assemble(
        "para_hyperhermitian", triple.geometry.name, points, clauses, seed=seed, pinned=pinned
    )
    if report.failing_clauses:
        logger.info(f"{triple.geometry.name}: para_hyperhermitian fails {report.failing_clauses}")
    return report


def verify_para_hyperhermitian(
    geom: GeometrySpec,
    triple: StructureTriple,
    samples: int,
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    """
    Check that a triple is para-hyperhermitian at seeded sample points.

    Args:
        geom: Geometry the triple lives on
        triple: Candidate (I, S, T)
        samples: Number of sample points
        seed: Sampling seed
        tol: Tolerance override for every residual clause

    Returns:
        CheckReport with one clause per identity; violations are report
        content, so a failing clause is isolated by name
    """
    sample = sample_points(geom, samples, seed)
    values = [para_hyperhermitian_at(triple, p) for p in sample.points]
    return para_hyperhermitian_report(triple, sample.points, values, sample.seed, tol)
