"""Suite execution and run-level verdicts."""

import asyncio
import logging
import time
from typing import List

from neutral4.config import get_settings
from neutral4.errors import SpecResolutionError
from neutral4.geometry.sampling import resolve_seed
from neutral4.models.registry import load_geometry
from neutral4.schemas.models import RunReport, SuiteSpec
from neutral4.schemas.report import CheckReport, Verdict
from neutral4.suites.context import SuiteContext
from neutral4.suites.registry import get_suite

logger = logging.getLogger(__name__)
settings = get_settings()


def _verdict(checks: List[CheckReport], expected_failure: bool) -> Verdict:
    failed = any(c.verdict == Verdict.FAIL for c in checks)
    if expected_failure:
        # an expected failure that no longer reproduces means the recorded finding is stale
        return Verdict.PASS if failed else Verdict.FAIL
    return Verdict.FAIL if failed else Verdict.PASS


async def run_suite(spec: SuiteSpec) -> RunReport:
    """
    Execute one suite on one geometry.

    Args:
        spec: Suite name, geometry reference, parameters, sampling and tolerances

    Returns:
        RunReport with the resolved spec (seed filled in), every CheckReport
        in a fixed order and the run verdict

    Raises:
        SpecResolutionError: unknown suite, geometry or parameter
        Neutral4Error: an evaluation could not be carried out at all
    """
    suite = get_suite(spec.suite)
    if spec.samples < 1:
        raise SpecResolutionError("samples must be at least 1", "run")
    seed, source = resolve_seed(spec.seed)
    if source == "entropy":
        logger.warning(f"No seed given; drew seed {seed} from system entropy")
    resolved = spec.model_copy(update={"seed": seed, "seed_source": source})
    bundle = load_geometry(spec.geometry, spec.params)
    context = SuiteContext(bundle=bundle, samples=spec.samples, seed=seed, tol=spec.tol)

    logger.info(f"Running suite '{suite.name}' on '{bundle.name}' ({spec.samples} samples, seed {seed})")
    started = time.perf_counter()
    checks = await suite.run(context)
    checks = [check.with_tier_overrides(dict(spec.tier_tolerances)) for check in checks]
    expected_failure = suite.name in bundle.expected_failures
    verdict = _verdict(checks, expected_failure)
    elapsed = time.perf_counter() - started

    for check in checks:
        logger.info(f"  {check.name} on {check.geometry}: {check.verdict.value}")
    if expected_failure:
        logger.info(f"Suite '{suite.name}' is an expected failure on '{bundle.name}'")
    logger.info(f"Suite '{suite.name}' finished in {elapsed:.2f}s: {verdict.value}")
    return RunReport(
        spec=resolved,
        checks=checks,
        expected_failures=[suite.name] if expected_failure else [],
        verdict=verdict,
        wall_time=elapsed,
    )


def run(spec: SuiteSpec) -> RunReport:
    """Synchronous entry point around `run_suite`."""
    return asyncio.run(run_suite(spec))
