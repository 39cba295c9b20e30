"""Orthonormal frames in split signature."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from neutral4.config import get_settings
from neutral4.errors import DegenerateFrameError

logger = logging.getLogger(__name__)
settings = get_settings()

EPSILON = np.array([1.0, 1.0, -1.0, -1.0])


@dataclass(frozen=True)
class OrthonormalFrame:
    """Columns E_1..E_4 with g(E_i, E_j) = eps_i delta_ij, eps = (+,+,-,-)."""

    vectors: np.ndarray
    orientation: int  # sign of det(E_1..E_4) relative to the chart (or declared frame) order

    @property
    def epsilon(self) -> np.ndarray:
        return EPSILON


def _gram_schmidt(g: np.ndarray, seeds: np.ndarray) -> np.ndarray:
    threshold = settings.frame_degeneracy_threshold
    remaining = [seeds[:, k].copy() for k in range(seeds.shape[1])]
    chosen = []
    signs = []
    for _ in range(4):
        best, best_norm, best_vec = -1, 0.0, None
        for k, w in enumerate(remaining):
            for e, s in zip(chosen, signs):
                w = w - s * (w @ g @ e) * e
            norm = float(w @ g @ w)
            if abs(norm) > abs(best_norm):
                best, best_norm, best_vec = k, norm, w
        if best < 0 or abs(best_norm) < threshold:
            raise DegenerateFrameError(
                f"no candidate with |g(v,v)| >= {threshold:g} after {len(chosen)} vectors"
            )
        chosen.append(best_vec / np.sqrt(abs(best_norm)))
        signs.append(1.0 if best_norm > 0 else -1.0)
        remaining.pop(best)
    positive = [e for e, s in zip(chosen, signs) if s > 0]
    negative = [e for e, s in zip(chosen, signs) if s < 0]
    if len(positive) != 2:
        raise DegenerateFrameError(f"metric has signature ({len(positive)},{len(negative)})")
    return np.column_stack(positive + negative)


def build_orthonormal_frame(
    g: np.ndarray, seeds: Optional[np.ndarray] = None, orientation: Optional[int] = None
) -> OrthonormalFrame:
    """
    Split-signature Gram-Schmidt with pivoting.

    At each step the remaining candidate with the largest |g(v,v)| after
    projection is taken (ties go to the lowest index). Positive vectors are
    placed first. When every candidate is nearly null, the seeds are jittered
    deterministically and the construction retried.

    Args:
        g: Metric at the point
        seeds: Candidate vectors as columns; the chart basis when omitted
        orientation: If given, E_4 is negated when needed to match this sign

    Returns:
        OrthonormalFrame with its orientation sign

    Raises:
        DegenerateFrameError: all attempts met a nearly null subspace
    """
    base = np.eye(4) if seeds is None else np.asarray(seeds, dtype=float)
    scale = max(1.0, float(np.max(np.abs(base))))
    vectors = None
    for attempt in Retrying(
        stop=stop_after_attempt(settings.frame_jitter_attempts),
        retry=retry_if_exception_type(DegenerateFrameError),
        reraise=True,
    ):
        with attempt:
            number = attempt.retry_state.attempt_number
            candidates = base
            if number > 1:
                logger.warning(f"Degenerate Gram-Schmidt; retrying with jittered seeds ({number})")
                rng = np.random.default_rng(number)
                jitter = rng.uniform(-1.0, 1.0, base.shape)
                candidates = base + settings.frame_jitter_magnitude * scale * jitter
            vectors = _gram_schmidt(g, candidates)
    assert vectors is not None
    sign = 1 if np.linalg.det(vectors) > 0 else -1
    if orientation is not None and sign != orientation:
        vectors = vectors.copy()
        vectors[:, 3] = -vectors[:, 3]
        sign = -sign
    return OrthonormalFrame(vectors, sign)


def frame_residual(g: np.ndarray, frame: OrthonormalFrame) -> float:
    """max |g(E_i, E_j) - eps_i delta_ij|."""
    gram = frame.vectors.T @ g @ frame.vectors
    return float(np.max(np.abs(gram - np.diag(EPSILON))))
