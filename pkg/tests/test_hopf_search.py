"""Tests for the multi-start null Killing pair search on S^1 x SU(2)."""

import numpy as np
import pytest

from neutral4.errors import Neutral4Error
from neutral4.models.hopf_search import (
    NO_SOLUTION,
    SOLUTION,
    AttemptResult,
    abelian_structure_constants,
    assemble_search_report,
    hopf_remark_search,
    hopf_residuals,
    hopf_structure_constants,
    killing_equations,
    pack,
    positive_control,
    search_attempt,
)

ETA = np.diag([1.0, 1.0, -1.0, -1.0])
X = np.array([1.0, 0.0, 1.0, 0.0])
Y = np.array([0.0, 1.0, 0.0, 1.0])


def attempt(index: int, residual: float) -> AttemptResult:
    return AttemptResult(index, residual, 10, np.zeros(18))


class TestResiduals:
    """Test cases for the constraint residuals."""

    def test_structure_constants(self):
        """Test [X2,X3] = X4 and antisymmetry of the su(2) part."""
        c = hopf_structure_constants()

        assert c[3, 1, 2] == 1.0 and c[1, 2, 3] == 1.0 and c[2, 3, 1] == 1.0
        assert np.array_equal(c, -np.transpose(c, (0, 2, 1)))
        assert not np.any(c[:, 0, :])

    def test_admissible_pair_on_the_abelian_frame(self):
        """Test that the flat pair X = E1+E3, Y = E2+E4 has zero residual when every bracket vanishes."""
        c = abelian_structure_constants()

        for mode in ("commuting", "any"):
            residuals = hopf_residuals(pack(ETA, X, Y), c, mode)
            assert np.max(np.abs(residuals)) < 1e-15, f"Failed for mode {mode}: {residuals}"

    def test_pair_is_not_killing_on_su2(self):
        c = hopf_structure_constants()

        residuals = hopf_residuals(pack(ETA, X, Y), c)

        assert np.max(np.abs(residuals)) > 1e-3

    def test_collinear_pair_hits_the_margin(self):
        """Test that Y = 2X is penalized by the non-collinearity margin."""
        residuals = hopf_residuals(pack(ETA, X, 2.0 * X), abelian_structure_constants(), "any")

        assert residuals[-2] == pytest.approx(0.1, abs=1e-15)

    def test_degenerate_metric_hits_the_conditioning_floor(self):
        g = np.diag([1.0, 1.0, -1.0, 0.0])

        residuals = hopf_residuals(pack(g, X, Y), abelian_structure_constants(), "any")

        assert residuals[-1] == pytest.approx(0.1, abs=1e-15)

    def test_commuting_mode_adds_the_bracket(self):
        c = hopf_structure_constants()
        params = pack(ETA, X, Y)

        assert len(hopf_residuals(params, c, "commuting")) == len(hopf_residuals(params, c, "any")) + 4

    def test_killing_equations(self):
        """Test that the central X1 is Killing and X3 is not for the split metric."""
        c = hopf_structure_constants()

        assert not np.any(killing_equations(c, ETA, np.array([1.0, 0.0, 0.0, 0.0])))
        assert np.any(killing_equations(c, ETA, np.array([0.0, 0.0, 1.0, 0.0])))
        # X2 rotates X3 into X4, both negative for the split metric
        assert not np.any(killing_equations(c, ETA, np.array([0.0, 1.0, 0.0, 0.0])))


class TestSearch:
    """Test cases for search attempts and the search report."""

    def test_attempts_are_deterministic(self):
        """Test that an attempt depends on (seed, index) only."""
        c = abelian_structure_constants()

        first = search_attempt(2, 7, c, "any")
        second = search_attempt(2, 7, c, "any")

        assert first.residual == second.residual
        assert np.array_equal(first.params, second.params)

    def test_positive_control(self):
        assert positive_control(42) < 1e-8

    def test_no_commuting_pair_on_su2(self):
        """Test that a few starts stay above the threshold."""
        report = hopf_remark_search(attempts=3, seed=42, control=False)

        assert report.no_solution_found
        assert report.conclusion == NO_SOLUTION
        assert report.minimum > report.threshold
        assert len(report.residuals) == 3
        assert report.control_residual is None

    def test_assemble_search_report(self):
        test_cases = [
            ([attempt(1, 0.2), attempt(0, 0.5)], NO_SOLUTION, [0.5, 0.2], 0.2),
            ([attempt(0, 0.5), attempt(1, 1e-6)], SOLUTION, [0.5, 1e-6], 1e-6),
            ([attempt(0, 1e-4)], SOLUTION, [1e-4], 1e-4),
        ]

        for results, conclusion, residuals, minimum in test_cases:
            report = assemble_search_report(results, seed=1, threshold=1e-4, mode="commuting")
            assert report.conclusion == conclusion, f"Failed for {residuals}"
            assert report.residuals == residuals
            assert report.minimum == minimum
            assert report.no_solution_found == (conclusion == NO_SOLUTION)

    def test_invalid_arguments(self):
        test_cases = [{"attempts": 0}, {"attempts": 1, "mode": "bogus"}]

        for kwargs in test_cases:
            with pytest.raises(Neutral4Error):
                hopf_remark_search(control=False, **kwargs)
