"""Uniform geometric backend for the coordinate and frame representations."""

from neutral4.geometry.jets import TensorJet
from neutral4.geometry.operations import (
    LocalGeometry,
    bracket_at,
    check_signature,
    inverse_metric_at,
    lie_bracket,
    metric_at,
    pullback_metric,
    pullback_oneform,
    pullback_twoform,
)
from neutral4.geometry.sampling import SampleSet, sample_points
from neutral4.geometry.spec import (
    DiffeoMap,
    FormField,
    GeometrySpec,
    VectorField,
    metric_from_coframe,
    resolve_geometry,
)

__all__ = [
    "DiffeoMap",
    "FormField",
    "GeometrySpec",
    "LocalGeometry",
    "SampleSet",
    "TensorJet",
    "VectorField",
    "bracket_at",
    "check_signature",
    "inverse_metric_at",
    "lie_bracket",
    "metric_at",
    "metric_from_coframe",
    "pullback_metric",
    "pullback_oneform",
    "pullback_twoform",
    "resolve_geometry",
    "sample_points",
]
