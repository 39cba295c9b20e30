"""Lie-derivative residuals of vector fields.

(L_K g)(A, B) = g(nabla_A K, B) + g(nabla_B K, A), so K is Killing when the
residual vanishes and conformal Killing when L_K g - (1/2) div(K) g does.
"""

import logging
from typing import Sequence

import numpy as np

from neutral4.geometry.jets import TensorJet
from neutral4.geometry.operations import LocalGeometry
from neutral4.geometry.spec import GeometrySpec, VectorField
from neutral4.structures.construction import EndomorphismField
from neutral4.structures.integrability import lie_derivative_jet
from neutral4.tensor.connection import nabla_vector

logger = logging.getLogger(__name__)


def killing_matrix(local: LocalGeometry, k: TensorJet) -> np.ndarray:
    """L_K g on basis pairs from nabla K."""
    m = nabla_vector(local, k).value
    g = local.g.value
    return m.T @ g + g @ m


def conformal_matrix(local: LocalGeometry, k: TensorJet) -> np.ndarray:
    m = nabla_vector(local, k).value
    g = local.g.value
    return m.T @ g + g @ m - 0.5 * float(np.trace(m)) * g


def bracket_route_matrix(local: LocalGeometry, k: TensorJet) -> np.ndarray:
    """(L_K g)_ab = K(g_ab) - g([K, e_a], e_b) - g(e_a, [K, e_b])."""
    g = local.g
    flow = np.einsum("m,abm->ab", k.value, g.d)
    bracket = -k.d + np.einsum("kma,m->ka", local.C, k.value)  # [K, e_a]
    return flow - bracket.T @ g.value - g.value @ bracket


def killing_residual(geom: GeometrySpec, K: VectorField, p: Sequence[float]) -> np.ndarray:
    """
    L_K g at `p` as a symmetric matrix on the chart (or frame) basis.

    Args:
        geom: Geometry
        K: Vector field
        p: Point

    Returns:
        Symmetric 4x4 matrix; zero iff K is Killing at p
    """
    local = LocalGeometry(geom, p)
    return killing_matrix(local, local.vector(K, order=1))


def conformal_killing_residual(geom: GeometrySpec, K: VectorField, p: Sequence[float]) -> np.ndarray:
    """L_K g - (1/2) div(K) g at `p`."""
    local = LocalGeometry(geom, p)
    return conformal_matrix(local, local.vector(K, order=1))


def lie_derivative_metric(geom: GeometrySpec, K: VectorField, p: Sequence[float]) -> np.ndarray:
    """L_K g through brackets with the basis, independent of the connection."""
    local = LocalGeometry(geom, p)
    return bracket_route_matrix(local, local.vector(K, order=1))


def holomorphy_residual(
    geom: GeometrySpec, K: VectorField, J: EndomorphismField, p: Sequence[float]
) -> np.ndarray:
    """(L_K J)(Z) = [K, JZ] - J[K, Z] on the basis; zero iff K is real holomorphic."""
    local = LocalGeometry(geom, p)
    return lie_derivative_jet(local.vector(K, order=1), J.at(local), local.C)


def divergence_routes(geom: GeometrySpec, K: VectorField, p: Sequence[float]) -> tuple:
    """div K as trace(nabla K) and as (1/2) trace_g(L_K g)."""
    local = LocalGeometry(geom, p)
    k = local.vector(K, order=1)
    trace = float(np.trace(nabla_vector(local, k).value))
    lie = bracket_route_matrix(local, k)
    return trace, 0.5 * float(np.einsum("ab,ab->", local.ginv.value, lie))
