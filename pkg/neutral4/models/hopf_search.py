"""Numerical search for a commuting pair of null Killing fields on S^1 x SU(2).

Unknowns are a left-invariant metric G (10 entries) and two left-invariant
fields X, Y (4 each). G, X and Y are normalized inside the residual, so the
trivial solutions X = 0 or G = 0 are unavailable. The search is evidence, not
proof: the report can only say that no solution was found below the threshold.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.optimize import least_squares

from neutral4.config import get_settings
from neutral4.errors import Neutral4Error
from neutral4.schemas.models import HopfSearchReport

logger = logging.getLogger(__name__)
settings = get_settings()

MODES = ("commuting", "any")
PARAMETERS = 18
_UPPER = np.triu_indices(4)

NO_SOLUTION = "no solution found below threshold"
SOLUTION = "solution found below threshold"


def hopf_structure_constants() -> np.ndarray:
    """[X2,X3] = X4, [X3,X4] = X2, [X4,X2] = X3 with X1 central (0-indexed in the array)."""
    c = np.zeros((4, 4, 4))
    for a, b, k in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        c[k, a, b] = 1.0
        c[k, b, a] = -1.0
    return c


def abelian_structure_constants() -> np.ndarray:
    return np.zeros((4, 4, 4))


def unpack(params: np.ndarray):
    g = np.zeros((4, 4))
    g[_UPPER] = params[:10]
    g = g + g.T - np.diag(np.diag(g))
    return g, params[10:14], params[14:18]


def pack(g: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.concatenate([np.asarray(g, dtype=float)[_UPPER], x, y])


def _unit(v: np.ndarray) -> np.ndarray:
    return v / max(float(np.linalg.norm(v)), 1e-300)


def killing_equations(c: np.ndarray, g: np.ndarray, v: np.ndarray) -> np.ndarray:
    """g([v,A],B) + g(A,[v,B]) on basis pairs, upper triangle."""
    ad = np.einsum("kab,a->kb", c, v)  # ad[k, b]: e_k component of [v, e_b]
    return (ad.T @ g + g @ ad)[_UPPER]


def hopf_residuals(params: np.ndarray, c: np.ndarray, mode: str = "commuting") -> np.ndarray:
    """
    Residual vector of the constraint system.

    Components: g(X,X), g(Y,Y), g(X,Y); [X,Y] (mode "commuting" only); the
    Killing equations of X and Y; the non-collinearity margin
    max(0, margin - |X ^ Y|) and the conditioning penalty
    max(0, floor - sigma_min(G)) after normalization.
    """
    g, x, y = unpack(params)
    g = g / max(float(np.linalg.norm(g)), 1e-300)
    x, y = _unit(x), _unit(y)
    parts = [np.array([x @ g @ x, y @ g @ y, x @ g @ y])]
    if mode == "commuting":
        parts.append(np.einsum("kab,a,b->k", c, x, y))
    parts.append(killing_equations(c, g, x))
    parts.append(killing_equations(c, g, y))
    wedge = np.linalg.norm(np.outer(x, y) - np.outer(y, x)) / np.sqrt(2.0)
    sigma = np.linalg.svd(g, compute_uv=False)
    parts.append(
        np.array(
            [
                max(0.0, settings.hopf_margin - wedge),
                max(0.0, settings.hopf_conditioning_floor - float(sigma[-1])),
            ]
        )
    )
    return np.concatenate(parts)


@dataclass(frozen=True)
class AttemptResult:
    index: int
    residual: float
    evaluations: int
    params: np.ndarray


def search_attempt(index: int, seed: int, c: np.ndarray, mode: str = "commuting") -> AttemptResult:
    """
    One local minimization from a random start.

    The start is drawn from the `index`-th child of SeedSequence(seed), so the
    outcome depends on (seed, index) only and attempts can run in any order.
    """
    child = np.random.SeedSequence(seed).spawn(index + 1)[index]
    rng = np.random.default_rng(child)
    start = rng.standard_normal(PARAMETERS)
    result = least_squares(
        hopf_residuals,
        start,
        args=(c, mode),
        method="trf",
        max_nfev=settings.hopf_max_evaluations,
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
    )
    residual = float(np.max(np.abs(hopf_residuals(result.x, c, mode))))
    logger.debug(f"Attempt {index}: residual {residual:.3e} after {result.nfev} evaluations")
    return AttemptResult(index, residual, int(result.nfev), result.x)


def positive_control(seed: int, attempts: int = 5) -> float:
    """Best residual of the same search on the abelian frame, where solutions exist."""
    c = abelian_structure_constants()
    return min(search_attempt(k, seed, c, "any").residual for k in range(attempts))


def assemble_search_report(
    results: List[AttemptResult],
    seed: int,
    threshold: float,
    mode: str,
    control_residual: Optional[float] = None,
) -> HopfSearchReport:
    ordered = sorted(results, key=lambda r: r.index)
    residuals = [r.residual for r in ordered]
    minimum = min(residuals)
    found = not minimum > threshold
    report = HopfSearchReport(
        mode=mode,
        attempts=len(ordered),
        seed=seed,
        threshold=threshold,
        residuals=residuals,
        evaluations=[r.evaluations for r in ordered],
        minimum=minimum,
        no_solution_found=not found,
        conclusion=SOLUTION if found else NO_SOLUTION,
        control_residual=control_residual,
    )
    if found:
        logger.warning(f"Hopf search ({mode}) reached residual {minimum:.3e} <= {threshold:g}")
    else:
        logger.info(f"Hopf search ({mode}): minimum residual {minimum:.3e} over {len(ordered)} attempts")
    return report


def hopf_remark_search(
    attempts: Optional[int] = None,
    seed: Optional[int] = None,
    threshold: Optional[float] = None,
    mode: str = "commuting",
    control: bool = True,
) -> HopfSearchReport:
    """
    Multi-start search for X, Y left-invariant, null, orthogonal and Killing on S^1 x SU(2).

    Args:
        attempts: Number of random starts
        seed: Root seed of the starts
        threshold: Residual below which a solution counts as found
        mode: "commuting" requires [X, Y] = 0, "any" drops it
        control: Also run the abelian positive control

    Returns:
        HopfSearchReport with the best residual of every attempt

    Raises:
        Neutral4Error: attempts < 1 or an unknown mode
    """
    attempts = settings.hopf_attempts if attempts is None else attempts
    seed = settings.hopf_seed if seed is None else seed
    threshold = settings.hopf_threshold if threshold is None else threshold
    if attempts < 1:
        raise Neutral4Error("attempts must be at least 1", "hopf_remark_search")
    if mode not in MODES:
        raise Neutral4Error(f"unknown mode '{mode}', expected one of {MODES}", "hopf_remark_search")
    c = hopf_structure_constants()
    results = [search_attempt(k, seed, c, mode) for k in range(attempts)]
    control_residual = positive_control(seed) if control else None
    return assemble_search_report(results, seed, threshold, mode, control_residual)
