"""Classification of 2-planes by the Hodge star."""

import logging
from enum import Enum
from typing import List, Tuple

import numpy as np

from neutral4.config import get_settings
from neutral4.tensor.forms import hodge_star_2, lower_bivector

logger = logging.getLogger(__name__)
settings = get_settings()


class PlaneClass(str, Enum):
    ALPHA = "alpha"  # isotropic, self-dual
    BETA = "beta"  # isotropic, anti-self-dual
    NOT_ISOTROPIC = "not_isotropic"
    DEGENERATE = "degenerate"


def classify_plane(g: np.ndarray, orientation: int, a: np.ndarray, b: np.ndarray) -> PlaneClass:
    """
    Classify span{a, b}.

    Args:
        g: Metric at the point
        orientation: Orientation used by the Hodge star
        a: First spanning vector
        b: Second spanning vector

    Returns:
        ALPHA when *(a^b) = a^b, BETA when *(a^b) = -(a^b), NOT_ISOTROPIC
        for planes that are not null and DEGENERATE for nearly dependent a, b.
        The result does not depend on the chosen basis of the plane.
    """
    a = np.asarray(a, dtype=float) / np.linalg.norm(a)
    b = np.asarray(b, dtype=float) / np.linalg.norm(b)
    if np.max(np.abs(np.outer(a, b) - np.outer(b, a))) <= settings.tol_algebraic:
        return PlaneClass.DEGENERATE
    # an orthonormal (Euclidean) basis of the plane makes the null test scale-free
    basis, _ = np.linalg.qr(np.column_stack([a, b]))
    u, w = basis[:, 0], basis[:, 1]
    scale = max(1.0, float(np.max(np.abs(g))))
    if max(abs(u @ g @ u), abs(w @ g @ w), abs(u @ g @ w)) / scale > settings.tol_first_derivative:
        return PlaneClass.NOT_ISOTROPIC
    form = lower_bivector(g, u, w)
    form = form / np.max(np.abs(form))
    star = hodge_star_2(g, orientation, form)
    if np.max(np.abs(star - form)) < settings.tol_first_derivative:
        return PlaneClass.ALPHA
    if np.max(np.abs(star + form)) < settings.tol_first_derivative:
        return PlaneClass.BETA
    return PlaneClass.NOT_ISOTROPIC


def plane_distance(first: Tuple[np.ndarray, np.ndarray], second: Tuple[np.ndarray, np.ndarray]) -> float:
    """Sine of the largest principal angle between two planes (Euclidean)."""
    p, _ = np.linalg.qr(np.column_stack(first))
    q, _ = np.linalg.qr(np.column_stack(second))
    cosines = np.linalg.svd(p.T @ q, compute_uv=False)
    return float(np.sqrt(max(0.0, 1.0 - float(np.min(cosines)) ** 2)))


def isotropic_plane_trials(
    g: np.ndarray,
    orientation: int,
    x: np.ndarray,
    jx: np.ndarray,
    u: np.ndarray,
    rng: np.random.Generator,
    trials: int,
) -> List[float]:
    """
    Exhaustiveness of the two isotropic planes through a null vector X.

    Random W are drawn from span{X, JX} and span{X, U} (the only isotropic
    planes containing X). Each trial returns 0 when the class of span{X, W}
    agrees with which of the two planes it equals, and 1 otherwise.
    """
    mismatches = []
    for _ in range(trials):
        s, t = rng.uniform(-1.0, 1.0, 2)
        t = t if abs(t) > 0.1 else 0.5
        use_alpha = bool(rng.integers(0, 2))
        w = s * x + t * (jx if use_alpha else u)
        kind = classify_plane(g, orientation, x, w)
        to_alpha = plane_distance((x, w), (x, jx))
        to_beta = plane_distance((x, w), (x, u))
        if kind == PlaneClass.ALPHA:
            ok = to_alpha < 1e-6
        elif kind == PlaneClass.BETA:
            ok = to_beta < 1e-6
        else:
            ok = False
        mismatches.append(0.0 if ok else 1.0)
    return mismatches
