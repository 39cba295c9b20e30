"""Riemann, Ricci and Weyl curvature and the Weyl half-split.

Sign convention: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
R_abcd = g(R(e_a,e_b)e_c, e_d), Ric_bc = trace(X -> R(X,e_b)e_c), so round
spheres have positive scalar curvature.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from neutral4.geometry.operations import LocalGeometry
from neutral4.geometry.spec import GeometrySpec
from neutral4.schemas.report import CheckReport, ClauseResult, Tier
from neutral4.tensor.connection import christoffel_jet
from neutral4.tensor.forms import BIVECTOR_NORMS, anti_self_dual_basis, self_dual_basis
from neutral4.tensor.frames import OrthonormalFrame, build_orthonormal_frame

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurvatureAtPoint:
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    weyl: np.ndarray
    w_plus: Optional[np.ndarray] = None
    w_minus: Optional[np.ndarray] = None
    cross: Optional[np.ndarray] = None
    orientation: int = 1


def riemann_up(local: LocalGeometry) -> np.ndarray:
    """Rup[n, c, a, b]: the e_n component of R(e_a, e_b) e_c."""

    def build() -> np.ndarray:
        jet = christoffel_jet(local)
        gamma, dgamma, c = jet.value, jet.d, local.C
        return (
            np.einsum("nbca->ncab", dgamma)
            - np.einsum("nacb->ncab", dgamma)
            + np.einsum("mbc,nam->ncab", gamma, gamma)
            - np.einsum("mac,nbm->ncab", gamma, gamma)
            - np.einsum("mab,nmc->ncab", c, gamma)
        )

    return local.cached("riemann_up", build)


def kulkarni_nomizu(p: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(P o g)_abcd = P_ad g_bc + P_bc g_ad - P_ac g_bd - P_bd g_ac."""
    return (
        np.einsum("ad,bc->abcd", p, g)
        + np.einsum("bc,ad->abcd", p, g)
        - np.einsum("ac,bd->abcd", p, g)
        - np.einsum("bd,ac->abcd", p, g)
    )


def curvature(local: LocalGeometry) -> CurvatureAtPoint:
    def build() -> CurvatureAtPoint:
        g = local.g.value
        ginv = local.ginv.value
        rup = riemann_up(local)
        riemann = np.einsum("ncab,nd->abcd", rup, g)
        ricci = np.einsum("acab->bc", rup)
        scalar = float(np.einsum("bc,bc->", ginv, ricci))
        schouten = 0.5 * (ricci - scalar / 6.0 * g)
        weyl = riemann - kulkarni_nomizu(schouten, g)
        return CurvatureAtPoint(riemann, ricci, scalar, weyl)

    return local.cached("curvature", build)


def riemann_at(geom: GeometrySpec, p: Sequence[float]) -> CurvatureAtPoint:
    """Riemann tensor (fully lowered), Ricci tensor, scalar curvature and Weyl tensor at `p`."""
    return curvature(LocalGeometry(geom, p))


def weyl_at(geom: GeometrySpec, p: Sequence[float]) -> np.ndarray:
    return curvature(LocalGeometry(geom, p)).weyl


def symmetry_residuals(local: LocalGeometry) -> Dict[str, float]:
    """Riemann symmetries, first Bianchi identity and Weyl trace, relative to max |R|."""
    curv = curvature(local)
    r = curv.riemann
    scale = max(1.0, float(np.max(np.abs(r))))
    weyl_trace = np.einsum("ad,abcd->bc", local.ginv.value, curv.weyl)
    return {
        "antisymmetry_first_pair": float(np.max(np.abs(r + r.transpose(1, 0, 2, 3)))) / scale,
        "antisymmetry_second_pair": float(np.max(np.abs(r + r.transpose(0, 1, 3, 2)))) / scale,
        "pair_symmetry": float(np.max(np.abs(r - r.transpose(2, 3, 0, 1)))) / scale,
        "first_bianchi": float(
            np.max(np.abs(r + r.transpose(1, 2, 0, 3) + r.transpose(2, 0, 1, 3)))
        )
        / scale,
        "weyl_trace": float(np.max(np.abs(weyl_trace))) / scale,
    }


def _curvature_form(w: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    """W(B, C) = 1/4 W_abcd B^ab C^cd for bivectors B, C (contravariant components)."""
    return 0.25 * float(np.einsum("abcd,ab,cd->", w, b, c))


def weyl_split(
    local: LocalGeometry, frame: Optional[OrthonormalFrame] = None, orientation: Optional[int] = None
) -> CurvatureAtPoint:
    """
    Weyl halves as operator matrices on the s^+ and s^- bases.

    M_ij = W(s_i, s_j) / <s_i, s_i>, where <s_1,s_1> = 2 and
    <s_2,s_2> = <s_3,s_3> = -2. Both halves are trace-free and self-adjoint
    for the bivector metric diag(1,-1,-1). `cross` holds W(s^+_i, s^-_j),
    which vanishes for any Weyl tensor.
    """
    curv = curvature(local)
    if frame is None:
        frame = build_orthonormal_frame(local.g.value, orientation=orientation)
    plus = self_dual_basis(frame.vectors)
    minus = anti_self_dual_basis(frame.vectors)
    w = curv.weyl
    w_plus = np.array(
        [[_curvature_form(w, plus[i], plus[j]) / BIVECTOR_NORMS[i] for j in range(3)] for i in range(3)]
    )
    w_minus = np.array(
        [[_curvature_form(w, minus[i], minus[j]) / BIVECTOR_NORMS[i] for j in range(3)] for i in range(3)]
    )
    cross = np.array([[_curvature_form(w, plus[i], minus[j]) for j in range(3)] for i in range(3)])
    return CurvatureAtPoint(
        curv.riemann, curv.ricci, curv.scalar, w, w_plus, w_minus, cross, frame.orientation
    )


def weyl_split_at(
    geom: GeometrySpec, p: Sequence[float], orientation: Optional[int] = None
) -> CurvatureAtPoint:
    """
    Split the Weyl tensor into its self-dual and anti-self-dual halves.

    Args:
        geom: Geometry
        p: Point
        orientation: Orientation of the orthonormal frame used; the chart (or
            declared frame) order is +1

    Returns:
        CurvatureAtPoint with w_plus, w_minus and the cross block filled in
    """
    return weyl_split(LocalGeometry(geom, p), orientation=orientation)


def vanishing_half(w_plus_norm: float, w_minus_norm: float, tol: float) -> str:
    """Which Weyl halves vanish: "plus", "minus", "both" or "neither"."""
    plus, minus = w_plus_norm < tol, w_minus_norm < tol
    if plus and minus:
        return "both"
    if plus:
        return "plus"
    if minus:
        return "minus"
    return "neither"


# Checks ------------------------------------------------------------------


def curvature_checks_at(geom: GeometrySpec, p: Sequence[float]) -> Dict[str, float]:
    local = LocalGeometry(geom, p)
    values = symmetry_residuals(local)
    curv = curvature(local)
    riemann = float(np.max(np.abs(curv.riemann)))
    values["riemann"] = riemann
    values["ricci"] = float(np.max(np.abs(curv.ricci))) / max(1.0, riemann)
    values["scalar"] = curv.scalar
    return values


_SYMMETRY_CLAUSES = (
    ("antisymmetry_first_pair", Tier.FIRST_DERIVATIVE, "R_abcd = -R_bacd"),
    ("antisymmetry_second_pair", Tier.FIRST_DERIVATIVE, "R_abcd = -R_abdc"),
    ("pair_symmetry", Tier.FIRST_DERIVATIVE, "R_abcd = R_cdab"),
    ("first_bianchi", Tier.FIRST_DERIVATIVE, "R_abcd + R_bcad + R_cabd = 0"),
    ("weyl_trace", Tier.CURVATURE, "g^ad W_abcd = 0"),
)


def curvature_report(
    geom: GeometrySpec,
    points: Sequence[Sequence[float]],
    values: List[Dict[str, float]],
    seed: Optional[int] = None,
    tol: Optional[float] = None,
    flat: bool = False,
    ricci_flat: bool = False,
    constant_scalar: bool = False,
) -> CheckReport:
    """
    Riemann symmetries at every point, plus the flatness claims a model makes.

    `flat` and `ricci_flat` switch on the clauses R = 0 (exact tier) and
    Ric = 0 (curvature tier); unclaimed properties are reported as not
    applicable rather than measured against a tolerance. `constant_scalar`
    compares s at every point with its sample mean, which is pinned.
    """
    clauses = [
        ClauseResult.from_residuals(name, tier, [v[name] for v in values], note=note, override=tol)
        for name, tier, note in _SYMMETRY_CLAUSES
    ]
    if ricci_flat:
        clauses.append(
            ClauseResult.from_residuals(
                "ricci_flat", Tier.CURVATURE, [v["ricci"] for v in values], note="Ric = 0", override=tol
            )
        )
    else:
        clauses.append(ClauseResult.not_applicable("ricci_flat", Tier.CURVATURE, "not claimed", tol))
    if flat:
        clauses.append(
            ClauseResult.from_residuals(
                "flat", Tier.EXACT, [v["riemann"] for v in values], note="R = 0", override=tol
            )
        )
    else:
        clauses.append(ClauseResult.not_applicable("flat", Tier.EXACT, "not claimed", tol))
    scalars = [v["scalar"] for v in values]
    mean = float(np.mean(scalars))
    if constant_scalar:
        scale = max(1.0, max(v["riemann"] for v in values))
        spread = [abs(s - mean) / scale for s in scalars]
        clauses.append(
            ClauseResult.from_residuals("scalar_constant", Tier.ALGEBRAIC, spread, note="s constant", override=tol)
        )
    else:
        clauses.append(ClauseResult.not_applicable("scalar_constant", Tier.ALGEBRAIC, "not claimed", tol))
    pinned = {"flat_claimed": flat, "ricci_flat_claimed": ricci_flat, "scalar": mean}
    return CheckReport.assemble("curvature", geom.name, points, clauses, seed=seed, pinned=pinned)


def weyl_checks_at(local: LocalGeometry, orientation: int) -> Dict[str, float]:
    """Weyl half norms and the algebraic identities of the split, relative to max |W|."""
    split = weyl_split(local, orientation=orientation)
    scale = max(1.0, float(np.max(np.abs(split.weyl))))
    norms = np.diag(BIVECTOR_NORMS)

    def adjoint_defect(m: np.ndarray) -> float:
        lowered = norms @ m
        return float(np.max(np.abs(lowered - lowered.T)))

    return {
        "w_plus": float(np.max(np.abs(split.w_plus))) / scale,
        "w_minus": float(np.max(np.abs(split.w_minus))) / scale,
        "trace_free": max(abs(float(np.trace(split.w_plus))), abs(float(np.trace(split.w_minus)))) / scale,
        "self_adjoint": max(adjoint_defect(split.w_plus), adjoint_defect(split.w_minus)) / scale,
        "cross_block": float(np.max(np.abs(split.cross))) / scale,
        "orientation": float(split.orientation),
    }
