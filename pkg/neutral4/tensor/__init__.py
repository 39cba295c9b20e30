"""Levi-Civita connection, curvature, Hodge star and the calculus of forms."""

from neutral4.tensor.connection import christoffel_at, covariant_derivative_vector
from neutral4.tensor.curvature import CurvatureAtPoint, riemann_at, weyl_at, weyl_split_at
from neutral4.tensor.forms import (
    codifferential_2,
    divergence,
    exterior_derivative,
    hodge_star_2,
    wedge11,
    wedge12,
    wedge22,
)
from neutral4.tensor.frames import OrthonormalFrame, build_orthonormal_frame

__all__ = [
    "CurvatureAtPoint",
    "OrthonormalFrame",
    "build_orthonormal_frame",
    "christoffel_at",
    "codifferential_2",
    "covariant_derivative_vector",
    "divergence",
    "exterior_derivative",
    "hodge_star_2",
    "riemann_at",
    "wedge11",
    "wedge12",
    "wedge22",
    "weyl_at",
    "weyl_split_at",
]
