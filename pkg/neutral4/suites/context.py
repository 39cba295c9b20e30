"""Concurrent per-point evaluation and the context every suite receives."""

import asyncio
import logging
from dataclasses import dataclass
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from neutral4.config import get_settings
from neutral4.errors import SpecResolutionError
from neutral4.geometry.sampling import SampleSet, sample_points
from neutral4.geometry.spec import GeometrySpec, VectorField
from neutral4.models.registry import ModelBundle

logger = logging.getLogger(__name__)
settings = get_settings()

T = TypeVar("T")
R = TypeVar("R")


async def run_points(func: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """
    Evaluate `func` on every item in worker threads.

    At most `max_concurrent_points` evaluations run at once. Results come back
    in input order, so reports do not depend on scheduling. The first
    exception raised by an evaluation propagates.
    """
    semaphore = asyncio.Semaphore(settings.max_concurrent_points)
    items = list(items)

    async def evaluate(idx: int, item: T) -> R:
        async with semaphore:
            logger.debug(f"  [{idx + 1}/{len(items)}] evaluating")
            return await asyncio.to_thread(func, item)

    return list(await asyncio.gather(*(evaluate(idx, item) for idx, item in enumerate(items))))


@dataclass
class SuiteContext:
    """Everything a suite needs: the resolved geometry, sampling and tolerance settings."""

    bundle: ModelBundle
    samples: int
    seed: int
    tol: Optional[float] = None

    @property
    def geometry(self) -> GeometrySpec:
        return self.bundle.geometry

    def pair(self, suite: str) -> Tuple[VectorField, VectorField]:
        if self.bundle.X is None or self.bundle.Y is None:
            raise SpecResolutionError(
                f"suite '{suite}' needs fields X and Y on geometry '{self.bundle.name}'", "run"
            )
        return self.bundle.X, self.bundle.Y

    def sample(self, accept: Optional[Callable[[np.ndarray], bool]] = None) -> SampleSet:
        return sample_points(self.geometry, self.samples, self.seed, accept=accept)

    async def evaluate(self, func: Callable[[Sequence[float]], Any], sample: SampleSet) -> List[Any]:
        return await run_points(func, sample.points)
