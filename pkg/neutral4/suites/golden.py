"""Golden corpus: pinned digests of seeded suite runs.

`update` re-runs GOLDEN_RUNS and rewrites one digest per run; `verify`
re-runs the spec stored in every digest found in the golden directory and
compares field by field.
"""

import asyncio
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Optional

from neutral4.config import get_settings
from neutral4.errors import SpecResolutionError
from neutral4.schemas.models import GoldenDigest, SuiteSpec, canonical_json, load_json
from neutral4.suites.runner import run_suite

logger = logging.getLogger(__name__)
settings = get_settings()

FLOAT_TOLERANCE = 1e-12

GOLDEN_RUNS: List[SuiteSpec] = [
    SuiteSpec(suite="signature", geometry="flat_neutral", seed=1),
    SuiteSpec(suite="curvature", geometry="flat_neutral", seed=1),
    SuiteSpec(suite="david", geometry="flat_neutral", seed=1),
    SuiteSpec(suite="curvature", geometry="petean_torus", seed=1),
    SuiteSpec(suite="curvature", geometry="kodaira", seed=1),
    SuiteSpec(suite="weyl_split", geometry="flat_neutral", seed=1),
    SuiteSpec(suite="weyl_split", geometry="petean_torus", seed=1),
    SuiteSpec(suite="para_hyperhermitian", geometry="sl2r_r", seed=1),
    SuiteSpec(suite="para_hyperhermitian", geometry="hopf", seed=1, tol=1e-8),
    SuiteSpec(suite="killing_pair", geometry="inoue_s_plus", seed=1),
    SuiteSpec(suite="david", geometry="petean_torus", samples=50, seed=7),
    SuiteSpec(suite="lee", geometry="inoue_s_plus", seed=1),
    SuiteSpec(suite="inoue_invariance", geometry="inoue_s_plus", seed=1),
    SuiteSpec(suite="hopf_remark", geometry="hopf", seed=42),
    SuiteSpec(suite="ad_oracle", geometry="inoue_s_plus", seed=1),
]


@dataclass
class GoldenResult:
    path: Path
    differences: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.differences


def golden_path(spec: SuiteSpec, directory: Optional[Path] = None) -> Path:
    geometry = Path(spec.geometry).stem
    return (directory or settings.golden_dir) / f"{spec.suite}__{geometry}.json"


def diff_documents(expected: Any, actual: Any, path: str = "") -> List[str]:
    """
    Field paths where two loaded JSON documents differ.

    Floats compare equal within FLOAT_TOLERANCE; everything else compares exactly.
    """
    where = path or "<root>"
    if isinstance(expected, dict) and isinstance(actual, dict):
        differences = []
        for key in list(expected) + [k for k in actual if k not in expected]:
            child = f"{path}.{key}" if path else str(key)
            if key not in actual or key not in expected:
                differences.append(child)
            else:
                differences.extend(diff_documents(expected[key], actual[key], child))
        return differences
    if isinstance(expected, list) and isinstance(actual, list):
        if len(expected) != len(actual):
            return [f"{where} (length {len(expected)} != {len(actual)})"]
        differences = []
        for idx, (e, a) in enumerate(zip(expected, actual)):
            differences.extend(diff_documents(e, a, f"{path}[{idx}]"))
        return differences
    numeric = (int, float)
    if (
        isinstance(expected, numeric)
        and isinstance(actual, numeric)
        and not isinstance(expected, bool)
        and not isinstance(actual, bool)
    ):
        if math.isclose(expected, actual, rel_tol=0.0, abs_tol=FLOAT_TOLERANCE):
            return []
        return [f"{where} ({expected!r} != {actual!r})"]
    return [] if expected == actual else [f"{where} ({expected!r} != {actual!r})"]


async def _digest(spec: SuiteSpec) -> GoldenDigest:
    if spec.seed is None:
        raise SpecResolutionError(f"golden run {spec.suite} on {spec.geometry} has no seed", "golden")
    return GoldenDigest.from_run(await run_suite(spec))


async def update_golden(
    runs: Optional[List[SuiteSpec]] = None, directory: Optional[Path] = None
) -> List[Path]:
    """Re-run every golden spec and rewrite its digest."""
    directory = directory or settings.golden_dir
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for spec in runs if runs is not None else GOLDEN_RUNS:
        digest = await _digest(spec)
        path = golden_path(spec, directory)
        path.write_text(canonical_json(digest), encoding="utf-8")
        logger.info(f"Wrote {path.name} ({digest.verdict.value})")
        written.append(path)
    return written


async def verify_golden(directory: Optional[Path] = None) -> List[GoldenResult]:
    """
    Re-run the spec pinned in every digest and compare.

    Raises:
        SpecResolutionError: the golden directory is missing or holds no digests
    """
    directory = directory or settings.golden_dir
    if not directory.is_dir():
        raise SpecResolutionError(f"golden directory {directory} does not exist", "golden")
    paths = sorted(directory.glob("*.json"))
    if not paths:
        raise SpecResolutionError(f"golden directory {directory} holds no digests", "golden")

    results = []
    for path in paths:
        expected = load_json(path.read_text(encoding="utf-8"))
        spec = SuiteSpec.model_validate(expected["spec"])
        digest = await _digest(spec)
        actual = load_json(canonical_json(digest))
        result = GoldenResult(path=path, differences=diff_documents(expected, actual))
        if result.ok:
            logger.info(f"{path.name}: ok")
        else:
            logger.error(f"{path.name}: {len(result.differences)} differing field(s)")
        results.append(result)
    return results


def update(runs: Optional[List[SuiteSpec]] = None, directory: Optional[Path] = None) -> List[Path]:
    return asyncio.run(update_golden(runs, directory))


def verify(directory: Optional[Path] = None) -> List[GoldenResult]:
    return asyncio.run(verify_golden(directory))
