"""Seeded sampling of points in the domain box."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from neutral4.config import get_settings
from neutral4.errors import Neutral4Error
from neutral4.exprdsl.expr import evaluate_value
from neutral4.geometry.spec import DiffeoMap, GeometrySpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SampleSet:
    points: np.ndarray  # (n, 4)
    seed: int
    seed_source: str  # "given" or "entropy"


def resolve_seed(seed: Optional[int]) -> tuple:
    if seed is not None:
        return int(seed), "given"
    drawn = int(np.random.SeedSequence().entropy % (2**63))
    logger.info(f"No seed given; drew {drawn} from entropy")
    return drawn, "entropy"


def sample_points(
    geom: GeometrySpec,
    samples: int,
    seed: Optional[int] = None,
    accept: Optional[Callable[[np.ndarray], bool]] = None,
) -> SampleSet:
    """
    Draw points uniformly from the open domain box.

    The generator is numpy's PCG64 (`default_rng(seed)`); each candidate uses
    one draw of four uniforms, so a seed fixes the whole sequence.

    Args:
        geom: Geometry whose domain box is sampled
        samples: Number of points to return
        seed: Seed; None draws one from system entropy and records that
        accept: Optional predicate, e.g. "the image under a map stays in the box"

    Returns:
        SampleSet with the points and the seed actually used
    """
    if samples < 1:
        raise Neutral4Error("samples must be at least 1", "sample_points")
    settings = get_settings()
    used, source = resolve_seed(seed)
    rng = np.random.default_rng(used)
    low = np.array([lo for lo, _ in geom.domain])
    high = np.array([hi for _, hi in geom.domain])

    points = []
    draws = 0
    while len(points) < samples:
        if draws >= settings.max_rejection_draws:
            raise Neutral4Error(
                f"only {len(points)} of {samples} points accepted after {draws} draws",
                "sample_points",
            )
        draws += 1
        candidate = rng.uniform(low, high)
        if not geom.contains(candidate):
            continue
        if accept is not None and not accept(candidate):
            continue
        points.append(candidate)
    return SampleSet(np.array(points), used, source)


def images_in_domain(geom: GeometrySpec, maps: Sequence[DiffeoMap]) -> Callable[[np.ndarray], bool]:
    """Acceptance predicate: the point's image under every map stays inside the domain box."""

    def accept(p: np.ndarray) -> bool:
        return all(
            geom.contains([evaluate_value(c, p, geom.params) for c in phi.components]) for phi in maps
        )

    return accept
