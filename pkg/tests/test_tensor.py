"""Tests for frames, forms and curvature."""

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from neutral4.errors import DegenerateFrameError
from neutral4.geometry.operations import LocalGeometry, metric_at
from neutral4.geometry.sampling import sample_points
from neutral4.models import builtin
from neutral4.schemas.report import Verdict
from neutral4.tensor.connection import compatibility_residual, torsion_residual
from neutral4.tensor.curvature import (
    curvature_checks_at,
    curvature_report,
    riemann_at,
    symmetry_residuals,
    vanishing_half,
    weyl_checks_at,
    weyl_split_at,
)
from neutral4.tensor.forms import (
    anti_self_dual_basis,
    exterior_derivative,
    hodge_matrix,
    hodge_star_2,
    lower,
    self_dual_basis,
    volume_coefficient,
    wedge11,
    wedge22,
)
from neutral4.tensor.frames import EPSILON, build_orthonormal_frame, frame_residual

ETA = np.diag([1.0, 1.0, -1.0, -1.0])

SHIPPED = ["flat_neutral", "petean_torus", "kodaira", "sl2r_r", "inoue_s_plus", "hopf"]


def neutral_metric(perturbation: np.ndarray) -> np.ndarray:
    """P^T eta P for P = Id + perturbation, a (2,2) metric."""
    p = np.eye(4) + perturbation
    return p.T @ ETA @ p


perturbations = arrays(np.float64, (4, 4), elements=st.floats(min_value=-0.2, max_value=0.2))


class TestOrthonormalFrame:
    """Test cases for split-signature Gram-Schmidt."""

    def test_standard_metric(self):
        frame = build_orthonormal_frame(ETA)

        assert np.allclose(frame.vectors, np.eye(4))
        assert frame.orientation == 1
        assert np.array_equal(frame.epsilon, EPSILON)

    def test_null_seeds(self):
        """Test a metric whose chart basis contains null vectors."""
        g = metric_at(builtin("petean_torus").geometry, [0.7, 0.0, 0.0, 0.0])

        frame = build_orthonormal_frame(g)

        assert frame_residual(g, frame) < 1e-12

    def test_requested_orientation(self):
        for orientation in (1, -1):
            frame = build_orthonormal_frame(ETA, orientation=orientation)
            assert frame.orientation == orientation
            assert np.sign(np.linalg.det(frame.vectors)) == orientation

    def test_wrong_signature(self):
        """Test DegenerateFrameError for metrics that are not (2,2)."""
        test_cases = [np.diag([-1.0, 1.0, 1.0, 1.0]), np.zeros((4, 4))]

        for g in test_cases:
            with pytest.raises(DegenerateFrameError):
                build_orthonormal_frame(g)

    @hypothesis_settings(max_examples=50, deadline=None)
    @given(perturbations)
    def test_random_metrics(self, perturbation):
        g = neutral_metric(perturbation)

        frame = build_orthonormal_frame(g)

        assert frame_residual(g, frame) < 1e-10


class TestHodgeStar:
    """Test cases for the Hodge star on 2-forms."""

    def test_star_squares_to_identity(self):
        star = hodge_matrix(ETA)

        assert np.allclose(star @ star, np.eye(6), atol=1e-14)

    @hypothesis_settings(max_examples=50, deadline=None)
    @given(perturbations, st.sampled_from([1, -1]))
    def test_self_dual_bases(self, perturbation, orientation):
        """Test *s+ = s+ and *s- = -s- in random orthonormal frames of either orientation."""
        g = neutral_metric(perturbation)
        frame = build_orthonormal_frame(g, orientation=orientation)

        plus = lower(g, self_dual_basis(frame.vectors))
        minus = lower(g, anti_self_dual_basis(frame.vectors))

        scale = max(1.0, float(np.max(np.abs(plus))), float(np.max(np.abs(minus))))
        for k in range(3):
            assert np.allclose(hodge_star_2(g, frame.orientation, plus[k]), plus[k], atol=1e-9 * scale)
            assert np.allclose(hodge_star_2(g, frame.orientation, minus[k]), -minus[k], atol=1e-9 * scale)

    def test_orientation_swaps_halves(self):
        frame = build_orthonormal_frame(ETA)
        plus = lower(ETA, self_dual_basis(frame.vectors))

        assert np.allclose(hodge_star_2(ETA, -1, plus[0]), -plus[0])


class TestWedge:
    """Test cases for wedge products."""

    def test_wedge22(self):
        """Test top-degree coefficients of products of basis 2-forms."""
        e = np.eye(4)
        test_cases = [
            (wedge11(e[0], e[1]), wedge11(e[2], e[3]), 1.0),
            (wedge11(e[0], e[2]), wedge11(e[1], e[3]), -1.0),
            (wedge11(e[0], e[3]), wedge11(e[1], e[2]), 1.0),
            (wedge11(e[0], e[1]), wedge11(e[0], e[2]), 0.0),
        ]

        for f, h, expected in test_cases:
            assert wedge22(f, h) == expected, f"Failed for {f} ^ {h}"
            assert wedge22(h, f) == expected

    def test_volume_coefficient(self):
        assert volume_coefficient(np.eye(4)) == 1.0
        assert volume_coefficient(np.eye(4)[[1, 0, 2, 3]]) == -1.0


class TestExteriorDerivative:
    """Test cases for d in the frame backend."""

    def setup_method(self):
        """Setup test fixtures."""
        self.bundle = builtin("sl2r_r")
        self.geom = self.bundle.geometry
        self.p = [0.0] * 4

    def test_coframe_derivatives(self):
        """Test d of the dual coframe from the brackets of sl(2,R)."""
        test_cases = [
            ("theta", None),
            ("alpha", (2, 3, 1.0)),
            ("beta", (1, 3, 1.0)),
            ("gamma", (1, 2, -1.0)),
        ]

        for name, entry in test_cases:
            d = exterior_derivative(self.geom, self.bundle.forms[name], self.p)
            expected = np.zeros((4, 4))
            if entry is not None:
                a, b, value = entry
                expected[a, b], expected[b, a] = value, -value
            assert np.allclose(d, expected, atol=1e-15), f"Failed for d{name}: {d}"

    def test_twoform_derivative(self):
        d = exterior_derivative(self.geom, self.bundle.forms["omega"], self.p)

        assert d[0, 2, 3] == pytest.approx(-1.0, abs=1e-15)
        assert d[1, 2, 3] == pytest.approx(0.0, abs=1e-15)

    def test_exact_forms_in_a_chart(self):
        geom = builtin("petean_torus").geometry
        for name in ["dx", "dy", "du", "dv"]:
            d = exterior_derivative(geom, geom.form(name), [0.3, 0.1, 0.2, 0.4])
            assert not np.any(d), f"d{name} should vanish"


class TestCurvature:
    """Test cases for Riemann, Ricci and Weyl curvature."""

    def test_levi_civita_connection(self):
        """Test metric compatibility and zero torsion on every shipped model."""
        for name in SHIPPED:
            geom = builtin(name).geometry
            for p in sample_points(geom, 5, seed=1).points:
                local = LocalGeometry(geom, p)
                scale = max(1.0, float(np.max(np.abs(local.g.d))))
                assert compatibility_residual(local) < 1e-10 * scale, f"{name}: connection not metric at {p}"
                assert torsion_residual(local) < 1e-10 * scale, f"{name}: connection has torsion at {p}"

    def test_flat_model(self):
        curv = riemann_at(builtin("flat_neutral").geometry, [0.1, 0.2, 0.3, 0.4])

        assert not np.any(curv.riemann)
        assert curv.scalar == 0.0

    def test_symmetries(self):
        """Test Riemann symmetries and the first Bianchi identity."""
        for name in SHIPPED:
            geom = builtin(name).geometry
            for p in sample_points(geom, 5, seed=2).points:
                residuals = symmetry_residuals(LocalGeometry(geom, p))
                for key, value in residuals.items():
                    assert value < 1e-9, f"{name}: {key} = {value} at {p}"

    def test_ricci_flat_models(self):
        """Test Ric = 0 on the Kaehler Ricci-flat models while R != 0."""
        for name in ["petean_torus", "kodaira"]:
            geom = builtin(name).geometry
            for p in sample_points(geom, 5, seed=3).points:
                values = curvature_checks_at(geom, p)
                assert values["ricci"] < 1e-8, f"{name}: Ricci {values['ricci']} at {p}"
                assert values["riemann"] > 1e-6, f"{name}: unexpectedly flat at {p}"

    def test_bi_invariant_curvature(self):
        """Test R(X,Y)Z = -1/4 [[X,Y],Z] for the bi-invariant metric on SL(2,R) x R."""
        geom = builtin("sl2r_r").geometry
        c = geom.structure_constants

        curv = riemann_at(geom, [0.0] * 4)

        # R_abcd = g(R(e_a,e_b)e_c, e_d) with R(e_a,e_b)e_c = -1/4 C^m_ab C^n_mc e_n
        expected = -0.25 * np.einsum("mab,nmc,nd->abcd", c, c, np.diag([1.0, 1.0, -1.0, -1.0]))
        assert np.allclose(curv.riemann, expected, atol=1e-14)

    def test_sl2r_scalar_curvature_is_constant(self):
        """Test s = 3/2 at every sampled point of SL(2,R) x R and the pinned mean."""
        geom = builtin("sl2r_r").geometry
        sample = sample_points(geom, 8, seed=1)
        values = [curvature_checks_at(geom, p) for p in sample.points]

        for p, v in zip(sample.points, values):
            assert v["scalar"] == pytest.approx(1.5, abs=1e-10), f"s = {v['scalar']} at {p}"

        report = curvature_report(geom, sample.points, values, sample.seed, constant_scalar=True)
        assert report.clause("scalar_constant").verdict == Verdict.PASS
        assert report.pinned["scalar"] == pytest.approx(1.5, abs=1e-10)

    def test_varying_scalar_curvature_fails_the_constant_clause(self):
        geom = builtin("flat_neutral").geometry
        points = [[0.0] * 4, [1.0] * 4]
        values = [{**curvature_checks_at(geom, p), "scalar": s} for p, s in zip(points, (0.0, 1e-6))]

        report = curvature_report(geom, points, values, constant_scalar=True)
        unclaimed = curvature_report(geom, points, values)

        assert report.clause("scalar_constant").verdict == Verdict.FAIL
        assert unclaimed.clause("scalar_constant").verdict == Verdict.NOT_APPLICABLE


class TestWeylSplit:
    """Test cases for the self-dual and anti-self-dual Weyl halves."""

    def test_vanishing_half(self):
        test_cases = [
            (0.0, 0.0, "both"),
            (0.0, 1.0, "plus"),
            (1.0, 0.0, "minus"),
            (1.0, 1.0, "neither"),
        ]

        for plus, minus, expected in test_cases:
            result = vanishing_half(plus, minus, 1e-8)
            assert result == expected, f"Failed for ({plus}, {minus}): got {result}, expected {expected}"

    def test_algebraic_identities(self):
        """Test trace-free, self-adjoint halves and a vanishing cross block."""
        for name in ["petean_torus", "sl2r_r", "inoue_s_plus", "hopf"]:
            geom = builtin(name).geometry
            for p in sample_points(geom, 5, seed=4).points:
                values = weyl_checks_at(LocalGeometry(geom, p), 1)
                for key in ("trace_free", "self_adjoint", "cross_block"):
                    assert values[key] < 1e-9, f"{name}: {key} = {values[key]} at {p}"

    def test_orientation_exchanges_halves(self):
        geom = builtin("petean_torus").geometry
        p = [0.4, 0.0, 0.0, 0.0]

        positive = weyl_split_at(geom, p, orientation=1)
        negative = weyl_split_at(geom, p, orientation=-1)

        assert np.max(np.abs(positive.w_plus)) == pytest.approx(np.max(np.abs(negative.w_minus)), abs=1e-10)

    def test_kaehler_ricci_flat_is_half_flat(self):
        """Test that exactly one half vanishes on the Ricci-flat Kaehler torus, the same one at every point."""
        geom = builtin("petean_torus").geometry

        halves = set()
        for p in sample_points(geom, 10, seed=5).points:
            values = weyl_checks_at(LocalGeometry(geom, p), 1)
            halves.add(vanishing_half(values["w_plus"], values["w_minus"], 1e-8))

        assert len(halves) == 1 and halves <= {"plus", "minus"}, f"halves seen: {halves}"
