"""Killing, conformal Killing and real-holomorphy residuals of vector fields."""

from neutral4.killing.pairs import check_killing_pair, david_checks, field_pair_at, field_pair_report
from neutral4.killing.residuals import (
    conformal_killing_residual,
    divergence_routes,
    holomorphy_residual,
    killing_residual,
    lie_derivative_metric,
)

__all__ = [
    "check_killing_pair",
    "conformal_killing_residual",
    "david_checks",
    "divergence_routes",
    "field_pair_at",
    "field_pair_report",
    "holomorphy_residual",
    "killing_residual",
    "lie_derivative_metric",
]
