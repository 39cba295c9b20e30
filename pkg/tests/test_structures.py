"""Tests for the structures built from a null pair and their integrability."""

import numpy as np
import pytest

from neutral4.errors import AdmissibilityError, PreconditionError
from neutral4.geometry.operations import LocalGeometry, form_at, metric_at
from neutral4.geometry.sampling import sample_points
from neutral4.models import builtin
from neutral4.schemas.report import Verdict
from neutral4.structures.checks import companion_planes_at, complex_structure_at, involution_at
from neutral4.structures.construction import (
    build_triple,
    companion_null_field,
    complete_null_pair,
    construct_complex_structure,
    construct_involution_S,
    fundamental_forms,
    structure_orientation,
)
from neutral4.structures.integrability import (
    lee_forms,
    nijenhuis,
    para_hyperhermitian_at,
    verify_para_hyperhermitian,
)
from neutral4.structures.planes import PlaneClass, classify_plane
from neutral4.structures.recovery import FormTriple, recover_structure_at, recover_structure_from_forms

ETA = np.diag([1.0, 1.0, -1.0, -1.0])

PAIR_MODELS = ["flat_neutral", "petean_torus", "kodaira", "sl2r_r", "inoue_s_plus", "hopf"]


class TestNullCompletion:
    """Test cases for complete_null_pair."""

    def test_pairings(self):
        """Test g(X,Z) = g(Y,T) = 1 and g(X,T) = g(Y,Z) = 0 on every model."""
        for name in PAIR_MODELS:
            bundle = builtin(name)
            geom = bundle.geometry
            for p in sample_points(geom, 3, seed=1).points:
                z, t = complete_null_pair(geom, bundle.X, bundle.Y, p)
                g = metric_at(geom, p)
                local = LocalGeometry(geom, p)
                x, y = local.vector(bundle.X, 0).value, local.vector(bundle.Y, 0).value
                assert x @ g @ z == pytest.approx(1.0, abs=1e-10), f"{name}: g(X,Z) at {p}"
                assert y @ g @ t == pytest.approx(1.0, abs=1e-10), f"{name}: g(Y,T) at {p}"
                assert abs(x @ g @ t) < 1e-10 and abs(y @ g @ z) < 1e-10, f"{name}: cross pairings at {p}"

    def test_preconditions(self):
        """Test that a bad pair is rejected with the failed condition named."""
        bundle = builtin("flat_neutral")
        geom, X, Y = bundle.geometry, bundle.X, bundle.Y
        E1 = bundle.extra_fields["E1"]
        p = [0.0] * 4

        test_cases = [
            (E1, Y, "X not null"),
            (X, E1, "Y not null"),
            (X, X.combine(1.0, X), "X, Y not independent"),
            (X, E1.combine(1.0, bundle.extra_fields["E4"]), "X, Y not orthogonal"),
        ]

        for first, second, condition in test_cases:
            with pytest.raises(PreconditionError) as info:
                complete_null_pair(geom, first, second, p)
            assert info.value.condition == condition, f"Failed for ({first.name}, {second.name}): {info.value}"


class TestComplexStructure:
    """Test cases for the complex structure J with JX = Y."""

    def test_residuals_vanish(self):
        """Test J^2 = -Id, compatibility, JX = Y and completion independence."""
        for name in PAIR_MODELS:
            bundle = builtin(name)
            for p in sample_points(bundle.geometry, 5, seed=2).points:
                values = complex_structure_at(bundle.geometry, bundle.X, bundle.Y, p)
                for key, value in values.items():
                    if key == "orientation":
                        continue
                    assert value < 1e-9, f"{name}: {key} = {value} at {p}"

    def test_flat_matrix(self):
        """Test J on flat R^{2,2} with X = E1 + E3, Y = E2 + E4."""
        bundle = builtin("flat_neutral")
        J = construct_complex_structure(bundle.geometry, bundle.X, bundle.Y)

        j = J.value_at(bundle.geometry, [0.0] * 4)

        assert np.allclose(j @ np.array([1.0, 0.0, 1.0, 0.0]), [0.0, 1.0, 0.0, 1.0], atol=1e-12)
        assert np.allclose(j.T @ ETA @ j, ETA, atol=1e-12)

    def test_orientation_is_constant_on_connected_domains(self):
        bundle = builtin("petean_torus")
        orientations = {
            structure_orientation(bundle.geometry, bundle.X, bundle.Y, p)
            for p in sample_points(bundle.geometry, 10, seed=3).points
        }

        assert len(orientations) == 1


class TestCompanionPlanes:
    """Test cases for the companion null field U and the isotropic planes through X."""

    def test_companion_field(self):
        bundle = builtin("sl2r_r")
        geom = bundle.geometry
        p = [0.0] * 4
        g = metric_at(geom, p)
        j = construct_complex_structure(geom, bundle.X, bundle.Y).value_at(geom, p)
        x = np.array([1.0, 0.0, 1.0, 0.0])

        u = companion_null_field(geom, bundle.X, bundle.Y, p)

        assert abs(u @ g @ u) < 1e-12
        assert abs(x @ g @ u) < 1e-12
        assert (j @ x) @ g @ u == pytest.approx(2.0, abs=1e-12)

    def test_plane_classes(self):
        """Test that span{X,JX} is alpha, span{X,U} and span{JX,JU} are beta."""
        for name in PAIR_MODELS:
            bundle = builtin(name)
            for p in sample_points(bundle.geometry, 3, seed=4).points:
                values = companion_planes_at(bundle.geometry, bundle.X, bundle.Y, p)
                for key in ("u_null", "x_u_orthogonal", "jx_u_pairing"):
                    assert values[key] < 1e-9, f"{name}: {key} = {values[key]} at {p}"
                for key in ("alpha_x_jx", "beta_x_u", "beta_jx_ju", "exhaustiveness"):
                    assert values[key] == 0.0, f"{name}: {key} failed at {p}"
                assert values["independence"] > 1e-6

    def test_classify_plane(self):
        """Test classification of coordinate planes of diag(1,1,-1,-1)."""
        e = np.eye(4)
        test_cases = [
            (e[0] + e[2], e[1] + e[3], PlaneClass.ALPHA),
            (e[0] + e[2], e[1] - e[3], PlaneClass.BETA),
            (e[0], e[1], PlaneClass.NOT_ISOTROPIC),
            (e[0] + e[2], 2.0 * (e[0] + e[2]), PlaneClass.DEGENERATE),
        ]

        for a, b, expected in test_cases:
            result = classify_plane(ETA, 1, a, b)
            assert result == expected, f"Failed for {a}, {b}: got {result}, expected {expected}"
            if expected in (PlaneClass.ALPHA, PlaneClass.BETA):
                assert classify_plane(ETA, 1, b, a) == expected
                assert classify_plane(ETA, -1, a, b) != expected


class TestInvolution:
    """Test cases for the involution S."""

    def test_residuals_vanish(self):
        """Test S^2 = Id, g-skewness, SJ = -JS, SX = X, SU = U and uniqueness."""
        for name in PAIR_MODELS:
            bundle = builtin(name)
            for p in sample_points(bundle.geometry, 3, seed=5).points:
                values = involution_at(bundle.geometry, bundle.X, bundle.Y, p)
                assert values["nullity"] == 0.0, f"{name}: S not unique at {p}"
                for key, value in values.items():
                    if key == "nullity":
                        continue
                    assert value < 1e-9, f"{name}: {key} = {value} at {p}"

    def test_eigenspaces_on_flat(self):
        bundle = builtin("flat_neutral")
        geom = bundle.geometry
        J = construct_complex_structure(geom, bundle.X, bundle.Y)
        S = construct_involution_S(geom, bundle.X, J)

        s = S.value_at(geom, [0.0] * 4)

        assert sorted(np.round(np.linalg.eigvals(s).real, 10).tolist()) == [-1.0, -1.0, 1.0, 1.0]


class TestRecovery:
    """Test cases for recovering (I, S, T, g) from three 2-forms."""

    def test_sl2r_forms(self):
        """Test the shipped forms of SL(2,R) x R give IV = A, IB = C and the metric."""
        bundle = builtin("sl2r_r")
        forms = FormTriple(*(bundle.forms[name] for name in ("omega", "Omega_re", "Omega_im")))

        recovered = recover_structure_at(bundle.geometry, forms, [0.0] * 4)

        e = np.eye(4)
        assert np.allclose(recovered.i @ e[0], e[1])
        assert np.allclose(recovered.i @ e[2], e[3])
        assert np.allclose(recovered.g, ETA)
        assert np.allclose(recovered.t, recovered.i @ recovered.s)

    def test_forms_of_a_built_triple(self):
        """Test that recovery inverts the fundamental forms of a constructed triple."""
        bundle = builtin("petean_torus")
        geom = bundle.geometry
        triple = build_triple(geom, bundle.X, bundle.Y)
        p = [0.3, 0.1, -0.4, 0.2]
        local = LocalGeometry(geom, p)
        point = triple.at(local)

        recovered = recover_structure_from_forms(*(f.value for f in point.forms))

        assert np.allclose(recovered.i, point.i.value, atol=1e-10)
        assert np.allclose(recovered.s, point.s.value, atol=1e-10)
        assert np.allclose(recovered.g, local.g.value, atol=1e-10)

    def test_inadmissible_forms(self):
        """Test AdmissibilityError naming the violated relation."""
        bundle = builtin("sl2r_r")
        geom = bundle.geometry
        p = [0.0] * 4
        f1, f2, f3 = (form_at(geom, bundle.forms[n], p) for n in ("omega", "Omega_re", "Omega_im"))

        test_cases = [
            ((f1, np.zeros((4, 4)), f3), "Omega_2 nondegenerate"),
            ((f1, f2, f2), "Omega_l ^ Omega_m = 0"),
            ((2.0 * f1, f2, f3), "-Omega_1^2 = Omega_2^2"),
            ((f1, f2, 2.0 * f3), "Omega_2^2 = Omega_3^2"),
        ]

        for forms, relation in test_cases:
            with pytest.raises(AdmissibilityError) as info:
                recover_structure_from_forms(*forms)
            assert info.value.relation == relation, f"expected {relation}, got {info.value.relation}"


class TestIntegrability:
    """Test cases for Nijenhuis tensors, Lee forms and the para-hyperhermitian check."""

    def test_flat_triple_is_para_hyperkaehler(self):
        bundle = builtin("flat_neutral")
        triple = build_triple(bundle.geometry, bundle.X, bundle.Y)

        values = para_hyperhermitian_at(triple, [0.2, -0.1, 0.5, 0.3])

        for key, value in values.items():
            assert value < 1e-12, f"{key} = {value}"

    def test_verify_on_models(self):
        """Test which shipped pairs give integrable triples."""
        test_cases = [
            ("flat_neutral", Verdict.PASS),
            ("petean_torus", Verdict.PASS),
            ("sl2r_r", Verdict.PASS),
            ("inoue_s_plus", Verdict.PASS),
            ("hopf", Verdict.FAIL),
        ]

        for name, expected in test_cases:
            bundle = builtin(name)
            triple = build_triple(bundle.geometry, bundle.X, bundle.Y)
            report = verify_para_hyperhermitian(bundle.geometry, triple, 10, seed=1)
            assert report.verdict == expected, f"Failed for {name}: {report.failing_clauses}"

    def test_hopf_fails_on_the_involution(self):
        """Test that the Hopf triple has I integrable but not S."""
        bundle = builtin("hopf")
        geom = bundle.geometry
        triple = build_triple(geom, bundle.X, bundle.Y)

        report = verify_para_hyperhermitian(geom, triple, 5, seed=1)

        assert "nijenhuis_S" in report.failing_clauses
        assert "i_square" not in report.failing_clauses
        assert np.max(np.abs(nijenhuis(geom, triple.S, [0.0] * 4))) > 0.5

    def test_lee_forms_agree_on_sl2r(self):
        bundle = builtin("sl2r_r")
        triple = build_triple(bundle.geometry, bundle.X, bundle.Y)

        theta1, theta2, theta3 = lee_forms(bundle.geometry, triple, [0.0] * 4)

        assert np.allclose(theta1, theta2, atol=1e-12)
        assert np.allclose(theta1, theta3, atol=1e-12)

    def test_fundamental_forms_are_antisymmetric(self):
        bundle = builtin("inoue_s_plus")
        triple = build_triple(bundle.geometry, bundle.X, bundle.Y)
        local = LocalGeometry(bundle.geometry, sample_points(bundle.geometry, 1, seed=6).points[0])
        point = triple.at(local)

        for form in fundamental_forms(local.g, (point.i, point.s, point.t)):
            assert np.allclose(form.value, -form.value.T, atol=1e-12)
