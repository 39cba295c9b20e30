"""Primary Kodaira surfaces: the deck maps and the gamma that makes the metric invariant."""

import logging
import math
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from neutral4.config import get_settings
from neutral4.errors import Neutral4Error
from neutral4.exprdsl.expr import Const, Coord, Expr, add, mul
from neutral4.geometry.operations import metric_at, pullback_metric
from neutral4.geometry.sampling import images_in_domain, sample_points
from neutral4.geometry.spec import DiffeoMap, GeometrySpec
from neutral4.schemas.report import CheckReport, ClauseResult, Tier

logger = logging.getLogger(__name__)
settings = get_settings()

X, Y, U, V = (Coord(k, name) for k, name in enumerate("xyuv"))

# (a_k, b_k) as complex numbers; a_1 = a_2 = 0, b_1 = Im(a_3 conj(a_4)) = -2 pi, b_2 = i.
# f = cos(x) is periodic under a_3 = 2 pi and a_4 = i.
DECK_TRANSLATIONS: Tuple[Tuple[complex, complex], ...] = (
    (0j, complex(-2 * math.pi, 0.0)),
    (0j, 1j),
    (complex(2 * math.pi, 0.0), 0j),
    (1j, 0j),
)


def _affine(terms: Sequence[Tuple[float, Expr]], shift: float) -> Expr:
    expr: Expr = Const(float(shift))
    for coef, coord in terms:
        if coef != 0.0:
            expr = add(expr, mul(Const(float(coef)), coord))
    return expr


def deck_map(name: str, a: complex, b: complex) -> DiffeoMap:
    """phi(z, w) = (z + a, w + conj(a) z + b) in the real coordinates (x, y, u, v)."""
    ar, ai = a.real, a.imag
    # conj(a) z = (ar x + ai y) + i (ar y - ai x)
    return DiffeoMap(
        name,
        (
            _affine([(1.0, X)], ar),
            _affine([(1.0, Y)], ai),
            _affine([(1.0, U), (ar, X), (ai, Y)], b.real),
            _affine([(1.0, V), (ar, Y), (-ai, X)], b.imag),
        ),
    )


def kodaira_maps(translations: Sequence[Tuple[complex, complex]] = DECK_TRANSLATIONS) -> List[DiffeoMap]:
    """
    The four generators phi_1..phi_4 of the deck group.

    Raises:
        Neutral4Error: the translations violate a_1 = a_2 = 0, b_1 = Im(a_3 conj(a_4)) != 0 or b_2 != 0
    """
    (a1, b1), (a2, b2), (a3, _), (a4, _) = translations
    twist = (a3 * a4.conjugate()).imag
    if a1 != 0 or a2 != 0 or b2 == 0 or twist == 0 or not math.isclose(b1.real, twist) or b1.imag != 0:
        raise Neutral4Error("deck translations violate a1 = a2 = 0, b1 = Im(a3 conj(a4)) != 0, b2 != 0", "kodaira_maps")
    return [deck_map(f"phi{k + 1}", a, b) for k, (a, b) in enumerate(translations)]


def pullback_defect(geom: GeometrySpec, maps: Sequence[DiffeoMap], points: Sequence[Sequence[float]]) -> np.ndarray:
    """phi* g - g for every map and point, flattened."""
    return np.concatenate(
        [(pullback_metric(geom, phi, p) - metric_at(geom, p)).ravel() for phi in maps for p in points]
    )


def solve_kodaira_gamma(
    geom: GeometrySpec, samples: int = 10, seed: int = 0
) -> Tuple[float, float]:
    """
    gamma = gamma1 + i gamma2 making the metric invariant under the deck maps.

    The defect phi* g - g is affine in gamma, so three evaluations (gamma = 0,
    1 and i) fix it and a linear least-squares solve gives gamma.

    Args:
        geom: Kodaira geometry with parameters gamma1, gamma2
        samples: Sample points used for the defect
        seed: Sampling seed

    Returns:
        (gamma1, gamma2)
    """
    maps = kodaira_maps()
    sample = kodaira_sample(geom, maps, samples, seed)

    def defect(g1: float, g2: float) -> np.ndarray:
        trial = replace(geom, params={**geom.params, "gamma1": g1, "gamma2": g2})
        return pullback_defect(trial, maps, sample.points)

    base = defect(0.0, 0.0)
    columns = np.stack([defect(1.0, 0.0) - base, defect(0.0, 1.0) - base], axis=1)
    gamma, *_ = np.linalg.lstsq(columns, -base, rcond=None)
    logger.info(f"Kodaira gamma from the pullback defect: {gamma[0]:.12g} + {gamma[1]:.12g} i")
    return float(gamma[0]), float(gamma[1])


def kodaira_invariance_at(geom: GeometrySpec, maps: Sequence[DiffeoMap], p: Sequence[float]) -> Dict[str, float]:
    g = metric_at(geom, p)
    return {
        phi.name: float(np.max(np.abs(pullback_metric(geom, phi, p) - g))) / max(1.0, float(np.max(np.abs(g))))
        for phi in maps
    }


def kodaira_sample(geom: GeometrySpec, maps: Sequence[DiffeoMap], samples: int, seed: Optional[int] = None):
    """Seeded points whose images under every deck map stay in the domain box."""
    return sample_points(geom, samples, seed, accept=images_in_domain(geom, maps))


def kodaira_invariance_report(
    geom: GeometrySpec,
    maps: Sequence[DiffeoMap],
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> CheckReport:
    clauses = [
        ClauseResult.from_residuals(
            f"invariant_under_{phi.name}", Tier.ALGEBRAIC, [v[phi.name] for v in values],
            note=f"{phi.name}* g = g", override=tol,
        )
        for phi in maps
    ]
    pinned = {"gamma1": geom.params["gamma1"], "gamma2": geom.params["gamma2"]}
    return CheckReport.assemble("deck_invariance", geom.name, points, clauses, seed=seed, pinned=pinned)


def check_kodaira_invariance(
    geom: GeometrySpec, samples: int, seed: Optional[int] = None, tol: Optional[float] = None
) -> CheckReport:
    maps = kodaira_maps()
    sample = kodaira_sample(geom, maps, samples, seed)
    values = [kodaira_invariance_at(geom, maps, p) for p in sample.points]
    return kodaira_invariance_report(geom, maps, sample.points, values, sample.seed, tol)
