"""Per-point checks that combine several modules, with their reports.

Each `*_at` function evaluates one point and returns a flat dict of floats;
the matching `*_report` turns the list of dicts into a CheckReport.
"""

import logging
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from neutral4.config import get_settings
from neutral4.geometry.operations import LocalGeometry, form_at
from neutral4.geometry.spec import FormField, GeometrySpec, VectorField
from neutral4.models.registry import ModelBundle
from neutral4.schemas.report import CheckReport, ClauseResult, Tier, tolerance_for
from neutral4.structures.construction import StructureTriple, build_triple, structure_orientation
from neutral4.structures.integrability import (
    lee_form_differential,
    lee_forms,
    lie_derivative_endomorphism,
    nijenhuis_jet,
)
from neutral4.structures.recovery import FormTriple, structure_from_forms
from neutral4.tensor.curvature import vanishing_half, weyl_checks_at

logger = logging.getLogger(__name__)
settings = get_settings()


def _sup(array) -> float:
    return float(np.max(np.abs(array)))


# Weyl split --------------------------------------------------------------


def weyl_split_at(triple: StructureTriple, p: Sequence[float]) -> Dict[str, float]:
    geom = triple.geometry
    local = LocalGeometry(geom, p)
    orientation = structure_orientation(geom, triple.X, triple.Y, p)
    values = weyl_checks_at(local, orientation)
    point = triple.at(local)
    values["integrable"] = max(_sup(nijenhuis_jet(a, local.C)) for a in (point.i, point.s, point.t))
    values["one_half"] = min(values["w_plus"], values["w_minus"])
    return values


def weyl_split_report(
    geom: GeometrySpec,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    """
    Algebraic identities of the split everywhere; a vanishing half where the triple is integrable.

    The halves are taken in the orientation of the structure built from (X, Y),
    so the pinned `vanishing_half` is comparable across geometries.
    """
    clauses = [
        ClauseResult.from_residuals(name, Tier.CURVATURE, [v[name] for v in values], note=note, override=tol)
        for name, note in (
            ("trace_free", "trace W+ = trace W- = 0"),
            ("self_adjoint", "W+ and W- self-adjoint for the bivector metric"),
            ("cross_block", "W(s+_i, s-_j) = 0"),
        )
    ]
    integrable = ClauseResult.from_residuals(
        "integrable_triple", Tier.FIRST_DERIVATIVE, [v["integrable"] for v in values],
        tolerance=tolerance_for(Tier.FIRST_DERIVATIVE, tol), note="N_I = N_S = N_T = 0",
    )
    if integrable.passed:
        clauses.append(
            ClauseResult.from_residuals(
                "one_half_vanishes", Tier.CURVATURE, [v["one_half"] for v in values],
                note="min(|W+|, |W-|) = 0", override=tol,
            )
        )
    else:
        logger.warning(f"{geom.name}: one_half_vanishes is vacuous; the triple is not integrable")
        clauses.append(
            ClauseResult.not_applicable(
                "one_half_vanishes", Tier.CURVATURE, "hypotheses failed: integrable_triple", tol
            )
        )
    threshold = tolerance_for(Tier.CURVATURE, tol)
    halves = sorted({vanishing_half(v["w_plus"], v["w_minus"], threshold) for v in values})
    pinned = {
        "vanishing_half": halves[0] if len(halves) == 1 else "mixed",
        "orientations": sorted({int(v["orientation"]) for v in values}),
    }
    return CheckReport.assemble(
        "weyl_split", geom.name, points, clauses, seed=seed, hypotheses=[integrable], pinned=pinned
    )


# Holomorphy --------------------------------------------------------------


def holomorphy_at(
    triple: StructureTriple, fields: Mapping[str, VectorField], p: Sequence[float]
) -> Dict[str, float]:
    """L_X I, L_Y I and L_F I for each further field F, keyed `lie:<name>` for the latter."""
    geom = triple.geometry
    values = {
        "x_holomorphic": _sup(lie_derivative_endomorphism(geom, triple.X, triple.I, p)),
        "y_holomorphic": _sup(lie_derivative_endomorphism(geom, triple.Y, triple.I, p)),
    }
    for name, field in fields.items():
        values[f"lie:{name}"] = _sup(lie_derivative_endomorphism(geom, field, triple.I, p))
    return values


def holomorphy_report(
    triple: StructureTriple,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    claimed: bool,
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    names = {"x_holomorphic": triple.X.name, "y_holomorphic": triple.Y.name}
    clauses = []
    for key, field_name in names.items():
        if claimed:
            clauses.append(
                ClauseResult.from_residuals(
                    key, Tier.FIRST_DERIVATIVE, [v[key] for v in values], note=f"L_{field_name} I = 0", override=tol
                )
            )
        else:
            clauses.append(ClauseResult.not_applicable(key, Tier.FIRST_DERIVATIVE, "not claimed", tol))
    # measured whether or not holomorphy is claimed
    lie_max = {field_name: max(v[key] for v in values) for key, field_name in names.items()}
    for key in values[0]:
        if key.startswith("lie:"):
            lie_max[key[len("lie:"):]] = max(v[key] for v in values)
    pinned = {"lie_derivative_max": lie_max}
    return CheckReport.assemble("holomorphy", triple.geometry.name, points, clauses, seed=seed, pinned=pinned)


# Lee form ----------------------------------------------------------------


def reference_triple(bundle: ModelBundle) -> StructureTriple:
    """The triple a model's Lee form claim refers to: shipped forms if any, else built from (X, Y)."""
    geom = bundle.geometry
    names = bundle.info.triple_forms
    if names is not None:
        triple = structure_from_forms(geom, FormTriple(*(geom.form(n) for n in names)), name=names[0])
        return StructureTriple(geom, triple.I, triple.S, triple.T, bundle.X, bundle.Y)
    return build_triple(geom, bundle.X, bundle.Y)


def lee_at(
    triple: StructureTriple, expected: Optional[FormField], coefficient: float, p: Sequence[float]
) -> Dict[str, float]:
    geom = triple.geometry
    thetas = lee_forms(geom, triple, p)
    target = coefficient * form_at(geom, expected, p) if expected is not None else np.zeros(4)
    return {
        "lee_equal": max(_sup(thetas[0] - thetas[1]), _sup(thetas[0] - thetas[2])),
        "lee_closed": _sup(lee_form_differential(geom, triple, p)),
        "lee_matches": _sup(thetas[0] - target) / max(1.0, _sup(target)),
    }


def lee_report(
    triple: StructureTriple,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    expectation: Optional[str],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    clauses = [
        ClauseResult.from_residuals(
            "lee_equal", Tier.FIRST_DERIVATIVE, [v["lee_equal"] for v in values],
            note="theta_1 = theta_2 = theta_3", override=tol,
        ),
        ClauseResult.from_residuals(
            "lee_closed", Tier.CURVATURE, [v["lee_closed"] for v in values], note="d theta = 0", override=tol
        ),
    ]
    if expectation is None:
        clauses.append(ClauseResult.not_applicable("lee_matches", Tier.FIRST_DERIVATIVE, "no expected Lee form", tol))
    else:
        clauses.append(
            ClauseResult.from_residuals(
                "lee_matches", Tier.FIRST_DERIVATIVE, [v["lee_matches"] for v in values],
                note=f"theta = {expectation}", override=tol,
            )
        )
    pinned = {"triple": triple.I.name, "expected": expectation}
    return CheckReport.assemble("lee", triple.geometry.name, points, clauses, seed=seed, pinned=pinned)
