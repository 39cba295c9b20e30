"""Levi-Civita connection in a chart or an invariant frame.

Both backends use the Koszul formula on the basis e_a (coordinate vector
fields or the declared frame), with C^k_ab = 0 in a chart:

    2 g(nabla_a e_b, e_c) = e_a g_bc + e_b g_ac - e_c g_ab
                            + g([e_a,e_b],e_c) - g([e_b,e_c],e_a) + g([e_c,e_a],e_b)

Gamma[k, a, b] is the e_k component of nabla_{e_a} e_b.
"""

import logging
from typing import Sequence

import numpy as np

from neutral4.geometry.jets import TensorJet, contract, einsum
from neutral4.geometry.operations import LocalGeometry
from neutral4.geometry.spec import GeometrySpec, VectorField

logger = logging.getLogger(__name__)


def christoffel_jet(local: LocalGeometry) -> TensorJet:
    """Connection coefficients with their first derivatives."""

    def build() -> TensorJet:
        dg = local.g.grad()  # dg[i, j, k] = e_k g_ij
        cl = contract("kc,kab->abc", local.g, local.C)  # cl[a, b, c] = g([e_a, e_b], e_c)
        lowered = (
            dg.transpose(1, 2, 0)
            + dg.transpose(1, 0, 2)
            - dg.transpose(2, 0, 1)
            + cl.transpose(2, 0, 1)
            - cl.transpose(1, 0, 2)
            - cl.transpose(1, 2, 0)
        ).scale(0.5)
        return einsum("kc,cab->kab", local.ginv, lowered)

    return local.cached("christoffel", build)


def christoffel_at(geom: GeometrySpec, p: Sequence[float]) -> np.ndarray:
    """Gamma[k, a, b] at `p`; symmetric in (a, b) for the coordinate backend."""
    return christoffel_jet(LocalGeometry(geom, p)).value


def compatibility_residual(local: LocalGeometry) -> float:
    """max |e_k g_ij - g(nabla_k e_i, e_j) - g(e_i, nabla_k e_j)|."""
    gamma = christoffel_jet(local).value
    g = local.g.value
    defect = (
        local.g.d
        - np.einsum("lki,lj->ijk", gamma, g)
        - np.einsum("lkj,il->ijk", gamma, g)
    )
    return float(np.max(np.abs(defect)))


def torsion_residual(local: LocalGeometry) -> float:
    """max |nabla_a e_b - nabla_b e_a - [e_a, e_b]|."""
    gamma = christoffel_jet(local).value
    return float(np.max(np.abs(gamma - gamma.transpose(0, 2, 1) - local.C)))


def nabla_vector(local: LocalGeometry, X: TensorJet) -> TensorJet:
    """M[k, a] = (nabla_{e_a} X)^k, one order below X."""
    return X.grad() + einsum("kab,b->ka", christoffel_jet(local), X)


def covariant_derivative_vector(geom: GeometrySpec, X: VectorField, p: Sequence[float]) -> np.ndarray:
    """
    Covariant derivative of a vector field at a point.

    Args:
        geom: Geometry
        X: Vector field in the geometry's backend
        p: Point

    Returns:
        Matrix M with M[k, a] the k-th component of nabla_{e_a} X
    """
    local = LocalGeometry(geom, p)
    return nabla_vector(local, local.vector(X)).value


def nabla_along(local: LocalGeometry, A: TensorJet, B: TensorJet) -> np.ndarray:
    """Components of nabla_A B for vectors A, B given as jets."""
    return nabla_vector(local, B).value @ A.value
