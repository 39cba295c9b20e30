"""Reports on pairs of orthogonal null vector fields."""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from neutral4.config import get_settings
from neutral4.geometry.operations import LocalGeometry, bracket_jet
from neutral4.geometry.sampling import sample_points
from neutral4.geometry.spec import GeometrySpec, VectorField
from neutral4.killing.residuals import bracket_route_matrix, conformal_matrix, killing_matrix
from neutral4.schemas.models import FieldPairReport
from neutral4.schemas.report import Bound, CheckReport, ClauseResult, Tier, tolerance_for
from neutral4.structures.construction import null_pair_residuals
from neutral4.tensor.connection import nabla_vector

logger = logging.getLogger(__name__)
settings = get_settings()

PAIR_QUANTITIES = (
    "k_null",
    "l_null",
    "orthogonal",
    "independence",
    "killing_k",
    "killing_l",
    "conformal_k",
    "conformal_l",
    "killing_routes",
    "bracket",
    "nabla_k_l",
    "nabla_l_k",
    "span_closed",
    "parallel_defect",
    "div_k",
    "div_l",
)


def _sup(array) -> float:
    return float(np.max(np.abs(array)))


def field_pair_at(geom: GeometrySpec, K: VectorField, L: VectorField, p: Sequence[float]) -> Dict[str, float]:
    """Every per-point quantity of a pair (K, L)."""
    local = LocalGeometry(geom, p)
    k, l = local.vector(K, order=1), local.vector(L, order=1)
    g = local.g.value
    kv, lv = k.value, l.value
    nk, nl = nabla_vector(local, k).value, nabla_vector(local, l).value  # nk[:, a] = nabla_{e_a} K
    residuals = null_pair_residuals(local, kv, lv)

    def off_span(v: np.ndarray) -> float:
        # span{K, L} is Lagrangian, so v lies in it iff g(v, K) = g(v, L) = 0
        return max(abs(v @ g @ kv), abs(v @ g @ lv))

    along = [nk @ kv, nk @ lv, nl @ kv, nl @ lv]  # nabla_K K, nabla_L K, nabla_K L, nabla_L L
    scale = max(1.0, _sup(g))
    return {
        "k_null": residuals["x_null"],
        "l_null": residuals["y_null"],
        "orthogonal": residuals["orthogonal"],
        "independence": residuals["independence"],
        "killing_k": _sup(killing_matrix(local, k)) / scale,
        "killing_l": _sup(killing_matrix(local, l)) / scale,
        "conformal_k": _sup(conformal_matrix(local, k)) / scale,
        "conformal_l": _sup(conformal_matrix(local, l)) / scale,
        "killing_routes": max(
            _sup(killing_matrix(local, k) - bracket_route_matrix(local, k)),
            _sup(killing_matrix(local, l) - bracket_route_matrix(local, l)),
        ),
        "bracket": _sup(bracket_jet(k, l, local.C).value),
        "nabla_k_l": _sup(nl @ kv),
        "nabla_l_k": _sup(nk @ lv),
        "span_closed": max(off_span(v) for v in along),
        "parallel_defect": max(max(off_span(nk[:, a]), off_span(nl[:, a])) for a in range(4)),
        "div_k": abs(float(np.trace(nk))),
        "div_l": abs(float(np.trace(nl))),
    }


def field_pair_report(
    geom: GeometrySpec,
    K: VectorField,
    L: VectorField,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
) -> FieldPairReport:
    return FieldPairReport(
        geometry=geom.name,
        k=K.name,
        l=L.name,
        seed=seed,
        points=[[float(x) for x in p] for p in points],
        residuals={name: [float(v[name]) for v in values] for name in PAIR_QUANTITIES},
    )


def killing_pair_report(
    geom: GeometrySpec,
    K: VectorField,
    L: VectorField,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    """Null, orthogonal, independent and Killing: the distinguished-pair claim."""
    clauses = [
        ClauseResult.from_residuals(name, Tier.FIRST_DERIVATIVE, [v[name] for v in values], note=note, override=tol)
        for name, note in (
            ("k_null", f"g({K.name},{K.name}) = 0"),
            ("l_null", f"g({L.name},{L.name}) = 0"),
            ("orthogonal", f"g({K.name},{L.name}) = 0"),
            ("killing_k", f"L_{K.name} g = 0"),
            ("killing_l", f"L_{L.name} g = 0"),
            ("killing_routes", "connection and bracket routes to L g agree"),
        )
    ]
    clauses.insert(
        3,
        ClauseResult.from_residuals(
            "independence", Tier.FIRST_DERIVATIVE, [v["independence"] for v in values],
            tolerance=settings.independence_threshold, bound=Bound.LOWER,
            note="|K ^ L| after normalization",
        ),
    )
    pinned = {
        "K": K.name,
        "L": L.name,
        "killing_k_max": max(v["killing_k"] for v in values),
        "killing_l_max": max(v["killing_l"] for v in values),
        "bracket_max": max(v["bracket"] for v in values),
    }
    return CheckReport.assemble("killing_pair", geom.name, points, clauses, seed=seed, pinned=pinned)


def check_killing_pair(
    geom: GeometrySpec,
    K: VectorField,
    L: VectorField,
    samples: int,
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    sample = sample_points(geom, samples, seed)
    values = [field_pair_at(geom, K, L, p) for p in sample.points]
    return killing_pair_report(geom, K, L, sample.points, values, sample.seed, tol)


def _gate(name: str, values: List[Dict[str, float]], keys: Sequence[str], tol: float, note: str) -> ClauseResult:
    return ClauseResult.from_residuals(
        name, Tier.FIRST_DERIVATIVE, [max(v[k] for k in keys) for v in values], tolerance=tol, note=note
    )


def david_report(
    geom: GeometrySpec,
    K: VectorField,
    L: VectorField,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    """
    Consequences for a null pair with conformal Killing members.

    Hypotheses are judged first and recorded in the report; each clause is
    evaluated only when its hypotheses hold at every sampled point and is
    marked not applicable otherwise.
    """
    threshold = tolerance_for(Tier.FIRST_DERIVATIVE, tol)
    null_pair = _gate("null_pair", values, ("k_null", "l_null", "orthogonal"), threshold, "K, L null and orthogonal")
    independent = ClauseResult.from_residuals(
        "independent", Tier.FIRST_DERIVATIVE, [v["independence"] for v in values],
        tolerance=settings.independence_threshold, bound=Bound.LOWER,
    )
    conformal_k = _gate("conformal_k", values, ("conformal_k",), threshold, "K conformal Killing")
    conformal_both = _gate(
        "conformal_both", values, ("conformal_k", "conformal_l"), threshold, "K and L conformal Killing"
    )
    commuting = _gate("commuting", values, ("bracket",), threshold, "[K, L] = 0")
    parallel = _gate("parallel", values, ("parallel_defect",), threshold, "span{K, L} parallel")
    hypotheses = [null_pair, independent, conformal_k, conformal_both, commuting, parallel]
    base = null_pair.passed and independent.passed

    def clause(name: str, gates: Sequence[ClauseResult], keys: Sequence[str], note: str) -> ClauseResult:
        if base and all(gate.passed for gate in gates):
            return ClauseResult.from_residuals(
                name, Tier.FIRST_DERIVATIVE, [max(v[k] for k in keys) for v in values], note=note, override=tol
            )
        failed = [g.name for g in [null_pair, independent, *gates] if not g.passed]
        logger.warning(f"{geom.name}: clause '{name}' is vacuous; hypotheses failed: {failed}")
        return ClauseResult.not_applicable(name, Tier.FIRST_DERIVATIVE, f"hypotheses failed: {', '.join(failed)}", tol)

    clauses = [
        clause("span_closed", [conformal_k], ("span_closed",), "nabla_A B in span{K, L} for A, B in {K, L}"),
        clause(
            "commuting_parallel",
            [conformal_both, commuting],
            ("nabla_k_l", "nabla_l_k", "parallel_defect"),
            "span{K, L} parallel and nabla_K L = nabla_L K = 0",
        ),
        clause(
            "parallel_killing",
            [conformal_both, parallel],
            ("div_k", "div_l", "bracket"),
            "div K = div L = 0 and [K, L] = 0",
        ),
    ]
    pinned = {"applicable": [c.name for c in clauses if c.applicable]}
    return CheckReport.assemble(
        "david", geom.name, points, clauses, seed=seed, hypotheses=hypotheses, pinned=pinned
    )


def david_checks(
    geom: GeometrySpec,
    K: VectorField,
    L: VectorField,
    samples: int,
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    """
    Run the three conditional clauses on a pair (K, L).

    Args:
        geom: Geometry
        K: First null field
        L: Second null field
        samples: Number of sample points
        seed: Sampling seed
        tol: Tolerance for hypotheses and clauses

    Returns:
        CheckReport with the gating hypotheses and the three clauses; a
        report whose clauses are all gated out is marked vacuous
    """
    sample = sample_points(geom, samples, seed)
    values = [field_pair_at(geom, K, L, p) for p in sample.points]
    return david_report(geom, K, L, sample.points, values, sample.seed, tol)
