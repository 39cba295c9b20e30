"""Tests for geometry resolution, sampling and pointwise metric operations."""

import math

import numpy as np
import pytest

from neutral4.config import REPO_ROOT
from neutral4.errors import (
    BackendMismatchError,
    DocumentError,
    ImageOutOfDomainError,
    Neutral4Error,
    SingularMetricError,
    SpecResolutionError,
)
from neutral4.exprdsl.document import parse_geometry
from neutral4.exprdsl.expr import evaluate_value
from neutral4.exprdsl.parser import SymbolTable, parse_expression
from neutral4.geometry.operations import (
    bracket_at,
    check_signature,
    inverse_metric_at,
    lie_bracket,
    metric_at,
    pullback_metric,
    signature_at,
)
from neutral4.geometry.sampling import images_in_domain, resolve_seed, sample_points
from neutral4.geometry.spec import DiffeoMap, VectorField, jacobi_defect, resolve_geometry
from neutral4.models import builtin, load_geometry
from neutral4.schemas.report import Verdict

FRAME_DOCUMENT = """
geometry "frame" {
    backend frame;
    frame A B C D;
    metric diag(1, 1, -1, -1);
    %s
}
"""

COORDINATE_DOCUMENT = """
geometry "chart" {
    backend coordinate;
    coords x y u v;
    param k = 2 "scale";
    domain x (-1, 1);
    %s
}
"""


def diffeo(geom, name, texts):
    table = SymbolTable.build(geom.names, list(geom.params))
    return DiffeoMap(name, tuple(parse_expression(t, table) for t in texts))


class TestSampling:
    """Test cases for seeded sampling."""

    def setup_method(self):
        """Setup test fixtures."""
        self.geom = builtin("inoue_s_plus").geometry

    def test_same_seed_same_points(self):
        first = sample_points(self.geom, 20, seed=5)
        second = sample_points(self.geom, 20, seed=5)

        assert np.array_equal(first.points, second.points)
        assert first.seed == 5 and first.seed_source == "given"

    def test_different_seeds_differ(self):
        first = sample_points(self.geom, 20, seed=5)
        second = sample_points(self.geom, 20, seed=6)

        assert not np.array_equal(first.points, second.points)

    def test_points_lie_in_open_box(self):
        """Test that every point lies strictly inside the domain box."""
        sample = sample_points(self.geom, 200, seed=3)

        assert sample.points.shape == (200, 4)
        for p in sample.points:
            assert self.geom.contains(p), f"point {p} outside {self.geom.domain}"

    def test_entropy_seed_is_recorded(self):
        """Test that a missing seed is drawn and reported, and reproduces the draw."""
        sample = sample_points(self.geom, 5)

        again = sample_points(self.geom, 5, seed=sample.seed)

        assert sample.seed_source == "entropy"
        assert np.array_equal(sample.points, again.points)

    def test_resolve_seed(self):
        assert resolve_seed(11) == (11, "given")
        assert resolve_seed(None)[1] == "entropy"

    def test_rejects_empty_sample(self):
        with pytest.raises(Neutral4Error):
            sample_points(self.geom, 0, seed=1)

    def test_acceptance_predicate(self):
        """Test that accepted points satisfy the image predicate."""
        geom = builtin("flat_neutral").geometry
        shift = diffeo(geom, "shift", ["x1 + 5", "x2", "x3", "x4"])

        sample = sample_points(geom, 30, seed=2, accept=images_in_domain(geom, [shift]))

        assert all(p[0] < 5.0 for p in sample.points)


class TestResolveGeometry:
    """Test cases for resolve_geometry."""

    def test_parameter_override(self):
        metric = 'metric { [0][0] = "k"; [1][1] = "1"; [2][2] = "-1"; [3][3] = "-1"; }'
        doc = parse_geometry(COORDINATE_DOCUMENT % metric)

        geom = resolve_geometry(doc, {"k": 3.0})

        assert geom.params == {"k": 3.0}
        assert metric_at(geom, [0.0, 0.0, 0.0, 0.0])[0, 0] == 3.0

    def test_unknown_parameter(self):
        doc = parse_geometry(COORDINATE_DOCUMENT % "metric diag(1, 1, -1, -1);")

        with pytest.raises(SpecResolutionError):
            resolve_geometry(doc, {"q": 1.0})

    def test_domain_defaults(self):
        """Test that undeclared coordinates get the default interval."""
        geom = resolve_geometry(parse_geometry(COORDINATE_DOCUMENT % "metric diag(1, 1, -1, -1);"))

        assert geom.domain[0] == (-1.0, 1.0)
        assert geom.domain[1] == (-10.0, 10.0)

    def test_jacobi_violation_rejected(self):
        """Test [[A,B],C] + [[B,C],A] + [[C,A],B] = A rejected at resolution."""
        doc = parse_geometry(FRAME_DOCUMENT % "bracket [A,B] = C; bracket [C,A] = D; bracket [D,B] = A;")

        with pytest.raises(DocumentError) as info:
            resolve_geometry(doc)

        assert "Jacobi" in str(info.value)

    def test_lie_algebras_satisfy_jacobi(self):
        for name in ["sl2r_r", "hopf", "inoue_s_plus"]:
            geom = builtin(name).geometry
            assert jacobi_defect(geom.structure_constants) < 1e-12, f"Jacobi defect for {name}"


class TestMetricOperations:
    """Test cases for metric evaluation and signature."""

    def test_metric_values(self):
        """Test metric entries of shipped models."""
        petean = builtin("petean_torus").geometry
        g = metric_at(petean, [0.0, 0.0, 0.0, 0.0])

        assert g[0, 0] == 3.0 and g[1, 1] == 3.0
        assert g[0, 2] == 1.0 and g[2, 0] == 1.0
        assert g[2, 2] == 0.0

    def test_inverse_metric(self):
        geom = builtin("petean_torus").geometry
        p = [0.4, 1.0, -2.0, 0.5]

        product = metric_at(geom, p) @ inverse_metric_at(geom, p)

        assert np.allclose(product, np.eye(4), atol=1e-12)

    def test_singular_metric(self):
        doc = parse_geometry(COORDINATE_DOCUMENT % 'metric { [0][0] = "1"; [1][1] = "1"; [2][2] = "-1"; }')

        with pytest.raises(SingularMetricError):
            inverse_metric_at(resolve_geometry(doc), [0.0, 0.0, 0.0, 0.0])

    def test_signature_at(self):
        """Test eigenvalue sign counts."""
        test_cases = [
            ("flat_neutral", (2, 2)),
            ("petean_torus", (2, 2)),
            ("sl2r_r", (2, 2)),
        ]

        for name, (positive, negative) in test_cases:
            geom = builtin(name).geometry
            sample = sample_points(geom, 10, seed=1)
            for p in sample.points:
                counts = signature_at(geom, p)
                assert (counts["positive"], counts["negative"]) == (positive, negative), f"Failed for {name} at {p}"

    def test_check_signature_on_shipped_models(self):
        for name in ["flat_neutral", "petean_torus", "kodaira", "sl2r_r", "inoue_s_plus", "hopf"]:
            report = check_signature(builtin(name).geometry, 20, seed=1)
            assert report.verdict == Verdict.PASS, f"signature failed for {name}: {report.failing_clauses}"

    def test_lorentzian_metric_is_rejected(self):
        """Test that a (3,1) metric fails and the signature seen is pinned."""
        bundle = load_geometry(str(REPO_ROOT / "geometries" / "bad_31.geom"))

        report = check_signature(bundle.geometry, 10, seed=1)

        assert report.verdict == Verdict.FAIL
        assert report.pinned["signature"] == "3,1"
        assert report.clause("signature_2_2").violations == list(range(10))


class TestLieBracket:
    """Test cases for Lie brackets in both backends."""

    def test_coordinate_bracket(self):
        """Test [d/dx, x d/dy] = d/dy and [x d/dx, y d/dy] = 0."""
        doc = parse_geometry(
            COORDINATE_DOCUMENT
            % 'metric diag(1, 1, -1, -1); field P = ("1", "0", "0", "0"); field Q = ("0", "x", "0", "0"); '
            'field R = ("x", "0", "0", "0"); field S = ("0", "y", "0", "0");'
        )
        geom = resolve_geometry(doc)
        p = [0.3, -0.2, 1.0, 2.0]

        test_cases = [
            ("P", "Q", [0.0, 1.0, 0.0, 0.0]),
            ("Q", "P", [0.0, -1.0, 0.0, 0.0]),
            ("R", "S", [0.0, 0.0, 0.0, 0.0]),
        ]

        for left, right, expected in test_cases:
            bracket = lie_bracket(geom, geom.field(left), geom.field(right))
            value = [evaluate_value(c, p, geom.params) for c in bracket.components]
            assert np.allclose(value, expected, atol=1e-15), f"Failed for [{left},{right}]: {value}"
            assert np.allclose(bracket_at(geom, geom.field(left), geom.field(right), p), expected, atol=1e-15)

    def test_frame_bracket(self):
        """Test brackets of the sl(2,R) frame."""
        bundle = builtin("sl2r_r")
        geom = bundle.geometry
        fields = bundle.extra_fields
        p = [0.0] * 4

        test_cases = [
            ("A", "B", [0.0, 0.0, 0.0, 1.0]),
            ("B", "C", [0.0, -1.0, 0.0, 0.0]),
            ("C", "A", [0.0, 0.0, 1.0, 0.0]),
            ("V", "A", [0.0, 0.0, 0.0, 0.0]),
        ]

        for left, right, expected in test_cases:
            value = bracket_at(geom, fields[left], fields[right], p)
            assert np.allclose(value, expected, atol=1e-15), f"Failed for [{left},{right}]: {value}"

    def test_backend_mismatch(self):
        flat = builtin("flat_neutral").geometry
        frame_field = VectorField.constant("E", [1.0, 0.0, 0.0, 0.0], builtin("sl2r_r").geometry.backend)

        with pytest.raises(BackendMismatchError):
            lie_bracket(flat, flat.field("X"), frame_field)


class TestPullback:
    """Test cases for metric pullbacks."""

    def setup_method(self):
        """Setup test fixtures."""
        self.flat = builtin("flat_neutral").geometry
        self.petean = builtin("petean_torus").geometry

    def test_isometries(self):
        """Test maps that preserve the metric."""
        test_cases = [
            (self.flat, ["x1 + 1", "x2 - 2", "x3", "x4 + 0.5"]),
            (self.flat, ["cos(0.3)*x1 - sin(0.3)*x2", "sin(0.3)*x1 + cos(0.3)*x2", "x3", "x4"]),
            (self.petean, ["x + 2*pi", "y + 1", "u - 1", "v"]),
        ]

        for geom, texts in test_cases:
            phi = diffeo(geom, "phi", texts)
            p = [0.3, -0.7, 1.2, 0.4]
            pulled = pullback_metric(geom, phi, p)
            assert np.allclose(pulled, metric_at(geom, p), atol=1e-12), f"Failed for {geom.name}: {texts}"

    def test_boost_is_not_an_isometry_of_petean(self):
        phi = diffeo(self.petean, "scale", ["2*x", "y", "u", "v"])

        pulled = pullback_metric(self.petean, phi, [0.5, 0.0, 0.0, 0.0])

        assert pulled[0, 0] == pytest.approx(4.0 * (2.0 + math.cos(1.0)), abs=1e-12)

    def test_image_out_of_domain(self):
        phi = diffeo(self.flat, "far", ["x1 + 100", "x2", "x3", "x4"])

        with pytest.raises(ImageOutOfDomainError):
            pullback_metric(self.flat, phi, [0.0, 0.0, 0.0, 0.0])

    def test_frame_backend_has_no_pullback(self):
        geom = builtin("sl2r_r").geometry
        phi = diffeo(geom, "id", ["V", "A", "B", "C"])

        with pytest.raises(BackendMismatchError):
            pullback_metric(geom, phi, [0.0] * 4)
