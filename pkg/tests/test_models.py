"""Tests for the builtin models, the Inoue constants and the Kodaira deck group."""

import math

import numpy as np
import pytest

from neutral4.errors import InoueParameterError, Neutral4Error, SpecResolutionError
from neutral4.exprdsl.expr import evaluate_value
from neutral4.geometry.operations import metric_at
from neutral4.geometry.sampling import sample_points
from neutral4.models import MODELS, SUITE_NAMES, builtin, describe_model, list_models
from neutral4.models.inoue import (
    OMEGA_F_CHOICES,
    check_inoue_structure,
    inoue_constants,
    inoue_generators,
    inoue_omega_f_geometry,
    omega_f_form,
)
from neutral4.models.kodaira import DECK_TRANSLATIONS, check_kodaira_invariance, kodaira_maps, solve_kodaira_gamma
from neutral4.schemas.report import Verdict

GOLDEN_RATIO_SQUARED = (3.0 + math.sqrt(5.0)) / 2.0


def image(phi, p, params=None):
    return [evaluate_value(c, p, params or {}) for c in phi.components]


class TestRegistry:
    """Test cases for the model registry."""

    def test_list_models(self):
        assert list_models() == ["flat_neutral", "petean_torus", "kodaira", "sl2r_r", "inoue_s_plus", "hopf"]

    def test_manifests_name_known_suites(self):
        for name, info in MODELS.items():
            assert set(info.manifest) <= set(SUITE_NAMES), f"{name} claims unknown suites"
            assert set(info.expected_failures) <= set(info.manifest), f"{name} expects failures outside its manifest"

    def test_only_hopf_expects_failures(self):
        for name, info in MODELS.items():
            assert bool(info.expected_failures) == (name == "hopf"), f"Failed for {name}"

    def test_bundles_carry_the_null_pair(self):
        """Test that X and Y are null and orthogonal at a sample point of every model."""
        for name in list_models():
            bundle = builtin(name)
            geom = bundle.geometry
            p = sample_points(geom, 1, seed=7).points[0]
            g = metric_at(geom, p)
            x = np.array([evaluate_value(c, p, geom.params) for c in bundle.X.components])
            y = np.array([evaluate_value(c, p, geom.params) for c in bundle.Y.components])
            for label, value in (("g(X,X)", x @ g @ x), ("g(Y,Y)", y @ g @ y), ("g(X,Y)", x @ g @ y)):
                assert abs(value) < 1e-12, f"{name}: {label} = {value}"

    def test_unknown_model(self):
        with pytest.raises(SpecResolutionError):
            builtin("nope")

    def test_unknown_parameter(self):
        with pytest.raises(SpecResolutionError):
            builtin("petean_torus", {"b0": 1.0})

    def test_parameter_override(self):
        bundle = builtin("petean_torus", {"a0": 3.0})

        assert metric_at(bundle.geometry, [0.0] * 4)[0, 0] == 4.0

    def test_describe_model(self):
        text = describe_model("inoue_s_plus")

        for fragment in ["inoue_s_plus", "n11 = 2", "det 1", "lnalpha", "inoue_invariance"]:
            assert fragment in text, f"'{fragment}' missing from description"

    def test_describe_lists_expected_failures(self):
        assert "expected failures: killing_pair" in describe_model("hopf")
        assert "expected failures" not in describe_model("flat_neutral")


class TestInoueConstants:
    """Test cases for inoue_constants."""

    def test_eigendata(self):
        """Test N = [[2,1],[1,1]]: alpha is the square of the golden ratio."""
        c = inoue_constants([[2, 1], [1, 1]])
        n = np.array(c.n, dtype=float)

        assert c.alpha == pytest.approx(GOLDEN_RATIO_SQUARED, abs=1e-12)
        assert np.allclose(n @ c.a, c.alpha * np.array(c.a), atol=1e-12)
        assert np.allclose(n @ c.b, np.array(c.b) / c.alpha, atol=1e-12)
        assert c.a[0] == 1.0 and c.b[0] == 1.0
        assert c.cc_residual < 1e-12

    def test_translation_system(self):
        """Test that c solves eps c = c N^tr + e + ((b1 a2 - b2 a1) / r) (p, q)."""
        test_cases = [
            ([[2, 1], [1, 1]], 0, 0, 1, 1),
            ([[2, 1], [1, 1]], 1, -2, 3, 1),
            ([[3, 1], [2, 1]], 1, 1, -1, 1),
            ([[3, 1], [2, 1]], 0, 1, 2, -1),
        ]

        for n, p, q, r, eps in test_cases:
            c = inoue_constants(n, p, q, r, epsilon=eps)
            matrix = np.array(n, dtype=float)
            shift = (c.b[0] * c.a[1] - c.b[1] * c.a[0]) / r
            rhs = np.array(c.c) @ matrix.T + np.array(c.e) + shift * np.array([p, q], dtype=float)
            assert np.allclose(eps * np.array(c.c), rhs, atol=1e-10), f"Failed for {n}, {(p, q, r, eps)}"

    def test_invalid_parameters(self):
        """Test InoueParameterError for each rejected input."""
        test_cases = [
            ({"n": [[0, -1], [1, 0]]}, "complex"),
            ({"n": [[1, 1], [0, 1]]}, "greater than 1"),
            ({"n": [[2, 0], [0, 1]]}, "det N"),
            ({"n": [[2.5, 1], [1, 1]]}, "integer"),
            ({"n": [[2, 1], [1, 1]], "r": 0}, "nonzero"),
            ({"n": [[2, 1], [1, 1]], "p": 0.5}, "integer"),
            ({"n": [[2, 1], [1, 1]], "epsilon": 2}, "epsilon"),
        ]

        for kwargs, fragment in test_cases:
            with pytest.raises(InoueParameterError) as info:
                inoue_constants(**kwargs)
            assert fragment in str(info.value), f"Failed for {kwargs}: {info.value}"

    def test_derived_parameter_is_bound(self):
        bundle = builtin("inoue_s_plus", {"n11": 3, "n12": 1, "n21": 2, "n22": 1})

        assert bundle.geometry.params["lnalpha"] == pytest.approx(math.log(bundle.inoue.alpha), abs=1e-15)
        assert bundle.inoue.alpha == pytest.approx(2.0 + math.sqrt(3.0), abs=1e-12)

    def test_lnalpha_cannot_be_overridden(self):
        with pytest.raises(SpecResolutionError):
            builtin("inoue_s_plus", {"lnalpha": 1.0})

    def test_invalid_override_is_rejected(self):
        with pytest.raises(InoueParameterError):
            builtin("inoue_s_plus", {"n11": 1})


class TestInoueGenerators:
    """Test cases for the generators g0..g3 of S+."""

    def setup_method(self):
        """Setup test fixtures."""
        self.constants = inoue_constants([[2, 1], [1, 1]], p=1, q=0, r=2, t1=0.3, t2=0.2)
        self.maps = inoue_generators(self.constants)
        self.p = [0.4, -0.3, 0.7, 1.5]

    def test_names(self):
        assert [phi.name for phi in self.maps] == ["g0", "g1", "g2", "g3"]

    def test_upper_half_plane_is_preserved(self):
        """Test that every generator keeps v > 0."""
        for phi in self.maps:
            assert image(phi, self.p)[3] > 0.0, f"{phi.name} leaves the upper half plane"

    def test_g0_scales_w(self):
        x, y, u, v = image(self.maps[0], self.p)

        assert u == pytest.approx(self.constants.alpha * 0.7, abs=1e-12)
        assert v == pytest.approx(self.constants.alpha * 1.5, abs=1e-12)
        assert (x, y) == pytest.approx((0.4 + 0.3, -0.3 + 0.2), abs=1e-12)

    def test_g3_translates_x(self):
        c = self.constants
        expected = (c.b[0] * c.a[1] - c.b[1] * c.a[0]) / c.r

        result = image(self.maps[3], self.p)

        assert result == pytest.approx([0.4 + expected, -0.3, 0.7, 1.5], abs=1e-12)

    def test_structure_check_passes(self):
        """Test the coframe identities and generator invariance on the shipped model."""
        bundle = builtin("inoue_s_plus")

        report = check_inoue_structure(bundle.geometry, bundle.inoue, 10, seed=1)

        assert report.verdict == Verdict.PASS, f"failing clauses: {report.failing_clauses}"
        assert report.pinned["alpha"] == pytest.approx(GOLDEN_RATIO_SQUARED, abs=1e-12)

    def test_twisted_structure_check_passes(self):
        bundle = builtin("inoue_s_plus", {"t2": 0.5, "t1": -0.25, "p": 1, "r": 2})

        report = check_inoue_structure(bundle.geometry, bundle.inoue, 10, seed=2)

        assert report.verdict == Verdict.PASS, f"failing clauses: {report.failing_clauses}"


class TestOmegaF:
    """Test cases for the omega_f family of Inoue metrics."""

    def setup_method(self):
        """Setup test fixtures."""
        self.geom = builtin("inoue_s_plus").geometry

    def test_unknown_label(self):
        with pytest.raises(SpecResolutionError):
            omega_f_form(self.geom, "cosh")

    def test_family_builds(self):
        """Test that every choice of f yields an admissible pair on a renamed geometry."""
        for label in OMEGA_F_CHOICES:
            triple = inoue_omega_f_geometry(self.geom, label, samples=5, seed=1)
            assert triple.geometry.name == f"inoue_s_plus[omega_f[{label}]]"

    def test_metric_changes_by_f(self):
        """Test g_f = g + f (a3^2 + a4^2) on the pair a3, a4 dual to X3, X4."""
        p = [0.1, 0.2, 0.3, 2.0]
        base = metric_at(inoue_omega_f_geometry(self.geom, "one", samples=5, seed=1).geometry, p)
        bumped = metric_at(inoue_omega_f_geometry(self.geom, "two_plus_cos_u", samples=5, seed=1).geometry, p)

        # the chart coefficient of a3^2 + a4^2 at v is 1 / v^2 on du^2 and dv^2
        assert (bumped - base)[3, 3] == pytest.approx((1.0 + math.cos(0.3)) / 4.0, abs=1e-12)
        assert (bumped - base)[0, 0] == pytest.approx(0.0, abs=1e-12)


class TestKodaira:
    """Test cases for the deck group of the primary Kodaira surface."""

    def test_solve_gamma(self):
        """Test that invariance under the deck maps fixes gamma = 1."""
        geom = builtin("kodaira", {"gamma1": 0.0, "gamma2": 0.5}).geometry

        gamma1, gamma2 = solve_kodaira_gamma(geom, samples=5, seed=1)

        assert gamma1 == pytest.approx(1.0, abs=1e-10)
        assert gamma2 == pytest.approx(0.0, abs=1e-10)

    def test_invariance(self):
        test_cases = [
            ({}, Verdict.PASS),
            ({"gamma1": 0.0, "gamma2": 0.0}, Verdict.FAIL),
        ]

        for params, expected in test_cases:
            geom = builtin("kodaira", params).geometry
            report = check_kodaira_invariance(geom, 10, seed=3)
            assert report.verdict == expected, f"Failed for {params}: {report.failing_clauses}"

    def test_wrong_gamma_breaks_the_lattice_translations(self):
        """Test that only the translations by a3 and a4 see gamma."""
        geom = builtin("kodaira", {"gamma1": 0.0, "gamma2": 0.0}).geometry

        report = check_kodaira_invariance(geom, 10, seed=3)

        assert report.failing_clauses == ["invariant_under_phi3"]

    def test_deck_maps(self):
        """Test phi(z, w) = (z + a, w + conj(a) z + b)."""
        maps = kodaira_maps()
        p = [0.5, -1.0, 2.0, 3.0]

        test_cases = [
            (maps[0], [0.5, -1.0, 2.0 - 2 * math.pi, 3.0]),
            (maps[1], [0.5, -1.0, 2.0, 4.0]),
            (maps[2], [0.5 + 2 * math.pi, -1.0, 2.0 + 2 * math.pi * 0.5, 3.0 + 2 * math.pi * -1.0]),
            (maps[3], [0.5, 0.0, 2.0 - 1.0, 3.0 - 0.5]),
        ]

        for phi, expected in test_cases:
            assert image(phi, p) == pytest.approx(expected, abs=1e-12), f"Failed for {phi.name}"

    def test_invalid_translations(self):
        """Test that translations outside the lattice conditions are rejected."""
        (a1, b1), (a2, b2), third, fourth = DECK_TRANSLATIONS
        test_cases = [
            [(1j, b1), (a2, b2), third, fourth],
            [(a1, b1), (a2, 0j), third, fourth],
            [(a1, 1.0 + 0j), (a2, b2), third, fourth],
        ]

        for translations in test_cases:
            with pytest.raises(Neutral4Error):
                kodaira_maps(translations)


class TestShippedModels:
    """Test cases for facts about individual shipped models."""

    def test_petean_volume_is_constant(self):
        geom = builtin("petean_torus").geometry

        for p in sample_points(geom, 10, seed=1).points:
            assert np.linalg.det(metric_at(geom, p)) == pytest.approx(1.0, abs=1e-12), f"at {p}"

