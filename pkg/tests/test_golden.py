"""Tests for golden digests and canonical serialization."""

import json

import pytest

from neutral4.errors import SpecResolutionError
from neutral4.schemas.models import GoldenDigest, SuiteSpec, canonical_json, format_float
from neutral4.schemas.report import Verdict
from neutral4.suites.golden import (
    GOLDEN_RUNS,
    diff_documents,
    golden_path,
    update_golden,
    verify_golden,
)
from neutral4.suites.runner import run_suite


class TestDiffDocuments:
    """Test cases for diff_documents."""

    def test_diff_documents(self):
        test_cases = [
            ({"a": 1.0}, {"a": 1.0 + 1e-13}, []),
            ({"a": 1.0}, {"a": 1.1}, ["a (1.0 != 1.1)"]),
            ({"a": {"b": "x"}}, {"a": {"b": "y"}}, ["a.b ('x' != 'y')"]),
            ({"a": 1}, {"b": 1}, ["a", "b"]),
            ({"a": [1, 2]}, {"a": [1]}, ["a (length 2 != 1)"]),
            ({"a": [1, 2]}, {"a": [1, 3]}, ["a[1] (2 != 3)"]),
            ([1.0], [1.0], []),
        ]

        for expected, actual, differences in test_cases:
            result = diff_documents(expected, actual)
            assert result == differences, f"Failed for {expected} vs {actual}: {result}"


class TestCanonicalJson:
    """Test cases for canonical serialization."""

    def test_format_float(self):
        test_cases = [
            (1.0, "1.0"),
            (0.1, "0.10000000000000001"),
            (1e-12, "9.9999999999999998e-13"),
            (1e-8, "1e-08"),
            (float("nan"), '"NaN"'),
            (float("-inf"), '"-Infinity"'),
        ]

        for value, expected in test_cases:
            assert format_float(value) == expected, f"Failed for {value!r}"

    async def test_equal_runs_serialize_identically(self):
        spec = SuiteSpec(suite="curvature", geometry="petean_torus", samples=5, seed=4)

        first = canonical_json(await run_suite(spec))
        second = canonical_json(await run_suite(spec))

        assert first == second
        assert json.loads(first)["spec"]["seed"] == 4


class TestGolden:
    """Test cases for updating and verifying the golden corpus."""

    def setup_method(self):
        """Setup test fixtures."""
        self.runs = [
            SuiteSpec(suite="signature", geometry="petean_torus", samples=5, seed=2),
            SuiteSpec(suite="david", geometry="flat_neutral", samples=5, seed=2),
        ]

    def test_every_golden_run_is_seeded(self):
        for spec in GOLDEN_RUNS:
            assert spec.seed is not None, f"{spec.suite} on {spec.geometry} has no seed"

    def test_every_golden_run_has_a_digest(self):
        """Test that each pinned run is committed and records the spec it was made from."""
        for spec in GOLDEN_RUNS:
            path = golden_path(spec)
            assert path.is_file(), f"{path.name} is missing"
            digest = GoldenDigest.model_validate(json.loads(path.read_text(encoding="utf-8")))
            assert digest.spec == spec, f"{path.name} pins {digest.spec}"
            assert digest.verdict == Verdict.PASS, f"{path.name} does not pass"

    def test_hopf_remark_digest(self):
        path = golden_path(SuiteSpec(suite="hopf_remark", geometry="hopf", seed=42))

        digest = json.loads(path.read_text(encoding="utf-8"))

        assert digest["checks"][0]["pinned"] == {
            "attempts": 200,
            "threshold": 1e-4,
            "conclusion": "no solution found below threshold",
        }

    def test_golden_path(self):
        spec = SuiteSpec(suite="signature", geometry="geometries/bad_31.geom", seed=1)

        assert golden_path(spec).name == "signature__bad_31.json"

    async def test_update_then_verify(self, tmp_path):
        written = await update_golden(self.runs, tmp_path)

        results = await verify_golden(tmp_path)

        assert [p.name for p in written] == ["signature__petean_torus.json", "david__flat_neutral.json"]
        assert all(r.ok for r in results), [r.differences for r in results]

    async def test_digest_has_no_residuals(self, tmp_path):
        """Test that digests pin verdicts and tolerances but no worst values."""
        (path,) = await update_golden(self.runs[:1], tmp_path)

        digest = GoldenDigest.model_validate(json.loads(path.read_text(encoding="utf-8")))
        clause = digest.checks[0].clauses[0]
        assert "worst" not in path.read_text(encoding="utf-8")
        assert clause.tolerance > 0.0

    async def test_tampered_digest_is_reported(self, tmp_path):
        (path,) = await update_golden(self.runs[:1], tmp_path)
        document = json.loads(path.read_text(encoding="utf-8"))
        document["verdict"] = "fail"
        path.write_text(json.dumps(document), encoding="utf-8")

        (result,) = await verify_golden(tmp_path)

        assert not result.ok
        assert result.differences == ["verdict ('fail' != 'pass')"]

    async def test_unseeded_run_is_rejected(self, tmp_path):
        with pytest.raises(SpecResolutionError):
            await update_golden([SuiteSpec(suite="signature", geometry="flat_neutral")], tmp_path)

    async def test_missing_directory(self, tmp_path):
        test_cases = [tmp_path / "absent", tmp_path]

        for directory in test_cases:
            with pytest.raises(SpecResolutionError):
                await verify_golden(directory)

    async def test_shipped_corpus(self):
        results = await verify_golden()

        assert results
        for result in results:
            assert result.ok, f"{result.path.name}: {result.differences}"
