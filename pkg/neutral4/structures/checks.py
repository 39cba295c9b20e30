"""Pointwise checks of the null-pair constructions: J, the companion field U and the involution S."""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from neutral4.config import get_settings
from neutral4.geometry.operations import LocalGeometry
from neutral4.geometry.sampling import sample_points
from neutral4.geometry.spec import GeometrySpec, VectorField
from neutral4.schemas.report import Bound, CheckReport, ClauseResult, Tier
from neutral4.structures.construction import (
    adapted_frame_jet,
    companion_jet,
    complete_null_pair_jet,
    involution_jet,
    involution_nullity,
)
from neutral4.structures.planes import PlaneClass, classify_plane, isotropic_plane_trials

logger = logging.getLogger(__name__)
settings = get_settings()


def _sup(array) -> float:
    return float(np.max(np.abs(array)))


def complex_structure_at(
    geom: GeometrySpec, X: VectorField, Y: VectorField, p: Sequence[float]
) -> Dict[str, float]:
    local = LocalGeometry(geom, p)
    x, y = local.vector(X), local.vector(Y)
    g = local.g.value
    completion = complete_null_pair_jet(local, x, y)
    z, t = completion.z.value, completion.t.value
    xv, yv = x.value, y.value
    frame = adapted_frame_jet(local, x, y)
    j = frame.j.value
    shifted = [adapted_frame_jet(local, x, y, shift).j.value for shift in settings.jitter_shifts]
    scale = max(1.0, _sup(xv), _sup(yv))
    return {
        "pairings": max(
            abs(xv @ g @ z - 1.0), abs(xv @ g @ t), abs(yv @ g @ z), abs(yv @ g @ t - 1.0)
        ),
        "j_square": _sup(j @ j + np.eye(4)),
        "compatibility": _sup(j.T @ g @ j - g) / max(1.0, _sup(g)),
        "jx_equals_y": _sup(j @ xv - yv) / scale,
        "jy_equals_minus_x": _sup(j @ yv + xv) / scale,
        "completion_independence": max(_sup(js - j) for js in shifted),
        "orientation": float(frame.orientation),
    }


def complex_structure_report(
    geom: GeometrySpec,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    specs = [
        ("pairings", Tier.ALGEBRAIC, "g(X,Z) = g(Y,T) = 1, g(X,T) = g(Y,Z) = 0"),
        ("j_square", Tier.FIRST_DERIVATIVE, "J^2 = -Id"),
        ("compatibility", Tier.FIRST_DERIVATIVE, "g(J.,J.) = g"),
        ("jx_equals_y", Tier.FIRST_DERIVATIVE, "JX = Y"),
        ("jy_equals_minus_x", Tier.ALGEBRAIC, "JY = -X"),
        ("completion_independence", Tier.FIRST_DERIVATIVE, "J unchanged under shifted completions"),
    ]
    clauses = [
        ClauseResult.from_residuals(name, tier, [v[name] for v in values], note=note, override=tol)
        for name, tier, note in specs
    ]
    orientations = sorted({int(v["orientation"]) for v in values})
    return CheckReport.assemble(
        "complex_structure", geom.name, points, clauses, seed=seed,
        pinned={"orientations": orientations},
    )


def check_complex_structure(
    geom: GeometrySpec,
    X: VectorField,
    Y: VectorField,
    samples: int,
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    """J^2 = -Id, compatibility, JX = Y and independence from the completion at sample points."""
    sample = sample_points(geom, samples, seed)
    values = [complex_structure_at(geom, X, Y, p) for p in sample.points]
    return complex_structure_report(geom, sample.points, values, sample.seed, tol)


def _point_rng(p: Sequence[float]) -> np.random.Generator:
    """A generator seeded by the bits of the point, so per-point trials do not depend on scheduling."""
    return np.random.default_rng(np.frombuffer(np.asarray(p, dtype=float).tobytes(), dtype=np.uint32))


def companion_planes_at(
    geom: GeometrySpec, X: VectorField, Y: VectorField, p: Sequence[float]
) -> Dict[str, float]:
    local = LocalGeometry(geom, p)
    x, y = local.vector(X), local.vector(Y)
    g = local.g.value
    frame = adapted_frame_jet(local, x, y)
    j = frame.j.value
    completion = complete_null_pair_jet(local, x, y)
    u = companion_jet(local.g, x, y, completion.t).value
    xv = x.value
    jx, ju = j @ xv, j @ u
    vectors = np.column_stack([xv, u, jx, ju])
    norms = float(np.prod(np.linalg.norm(vectors, axis=0)))
    orientation = frame.orientation
    classes = {
        "alpha_x_jx": classify_plane(g, orientation, xv, jx),
        "beta_x_u": classify_plane(g, orientation, xv, u),
        "beta_jx_ju": classify_plane(g, orientation, jx, ju),
    }
    trials = isotropic_plane_trials(
        g, orientation, xv, jx, u, _point_rng(p), settings.plane_trials_per_point
    )
    return {
        "u_null": abs(u @ g @ u),
        "x_u_orthogonal": abs(xv @ g @ u),
        "jx_u_pairing": abs(jx @ g @ u - 2.0),
        "independence": abs(float(np.linalg.det(vectors))) / norms,
        "alpha_x_jx": 0.0 if classes["alpha_x_jx"] == PlaneClass.ALPHA else 1.0,
        "beta_x_u": 0.0 if classes["beta_x_u"] == PlaneClass.BETA else 1.0,
        "beta_jx_ju": 0.0 if classes["beta_jx_ju"] == PlaneClass.BETA else 1.0,
        "exhaustiveness": max(trials),
    }


def companion_planes_report(
    geom: GeometrySpec,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    clauses = [
        ClauseResult.from_residuals(name, Tier.FIRST_DERIVATIVE, [v[name] for v in values], note=note, override=tol)
        for name, note in (
            ("u_null", "g(U,U) = 0"),
            ("x_u_orthogonal", "g(X,U) = 0"),
            ("jx_u_pairing", "g(JX,U) = 2"),
        )
    ]
    clauses.append(
        ClauseResult.from_residuals(
            "independence", Tier.FIRST_DERIVATIVE, [v["independence"] for v in values],
            bound=Bound.LOWER, note="|X ^ U ^ JX ^ JU| after normalization",
        )
    )
    for name, note in (
        ("alpha_x_jx", "span{X, JX} is an alpha-plane"),
        ("beta_x_u", "span{X, U} is a beta-plane"),
        ("beta_jx_ju", "span{JX, JU} is a beta-plane"),
        ("exhaustiveness", "isotropic planes through X are exactly span{X, JX} and span{X, U}"),
    ):
        clauses.append(
            ClauseResult.from_residuals(name, Tier.EXACT, [v[name] for v in values], tolerance=0.5, note=note)
        )
    return CheckReport.assemble("companion_planes", geom.name, points, clauses, seed=seed)


def involution_at(geom: GeometrySpec, X: VectorField, Y: VectorField, p: Sequence[float]) -> Dict[str, float]:
    local = LocalGeometry(geom, p)
    x, y = local.vector(X), local.vector(Y)
    g = local.g.value
    j = adapted_frame_jet(local, x, y).j
    s = involution_jet(local, x, j).value
    completion = complete_null_pair_jet(local, x, y)
    u = companion_jet(local.g, x, y, completion.t).value
    xv, jv = x.value, j.value
    nullity, system = involution_nullity(g, jv, xv, s)
    scale = max(1.0, _sup(xv), _sup(u))
    return {
        "s_square": _sup(s @ s - np.eye(4)),
        "skew": _sup(s.T @ g + g @ s),
        "anticommute": _sup(s @ jv + jv @ s),
        "s_fixes_x": _sup(s @ xv - xv) / scale,
        "s_fixes_u": _sup(s @ u - u) / scale,
        "s_negates_jx": _sup(s @ (jv @ xv) + jv @ xv) / scale,
        "trace": abs(float(np.trace(s))),
        "nullity": float(nullity),
        "system_residual": system,
    }


def involution_report(
    geom: GeometrySpec,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    specs = [
        ("s_square", "S^2 = Id"),
        ("skew", "g(SX,Y) + g(X,SY) = 0"),
        ("anticommute", "SJ = -JS"),
        ("s_fixes_x", "SX = X"),
        ("s_fixes_u", "SU = U"),
        ("s_negates_jx", "S(JX) = -JX"),
        ("trace", "trace S = 0"),
        ("system_residual", "S solves its defining linear system"),
    ]
    clauses = [
        ClauseResult.from_residuals(name, Tier.FIRST_DERIVATIVE, [v[name] for v in values], note=note, override=tol)
        for name, note in specs
    ]
    clauses.append(
        ClauseResult.from_residuals(
            "unique", Tier.EXACT, [v["nullity"] for v in values], tolerance=0.5,
            note="nullity of the defining linear system on 16 unknowns",
        )
    )
    pinned = {"max_nullity": int(max(v["nullity"] for v in values))}
    return CheckReport.assemble("involution", geom.name, points, clauses, seed=seed, pinned=pinned)


def check_involution(
    geom: GeometrySpec,
    X: VectorField,
    Y: VectorField,
    samples: int,
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    sample = sample_points(geom, samples, seed)
    values = [involution_at(geom, X, Y, p) for p in sample.points]
    return involution_report(geom, sample.points, values, sample.seed, tol)
