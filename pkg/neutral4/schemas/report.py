from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel, Field

from neutral4.config import get_settings

SCHEMA_VERSION = 1


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"


class Tier(str, Enum):
    """Tolerance tier; error grows with differentiation order."""

    EXACT = "exact"
    ALGEBRAIC = "algebraic"
    FIRST_DERIVATIVE = "first_derivative"
    CURVATURE = "curvature"


class Bound(str, Enum):
    UPPER = "upper"  # residuals must stay below the tolerance
    LOWER = "lower"  # values must stay above it (independence, margins)


def tolerance_for(tier: Tier, override: Optional[float] = None) -> float:
    if override is not None:
        return override
    settings = get_settings()
    return {
        Tier.EXACT: settings.tol_exact,
        Tier.ALGEBRAIC: settings.tol_algebraic,
        Tier.FIRST_DERIVATIVE: settings.tol_first_derivative,
        Tier.CURVATURE: settings.tol_curvature,
    }[tier]


class ClauseResult(BaseModel):
    """One named property evaluated at every sampled point."""

    name: str
    tier: Tier
    tolerance: float
    bound: Bound = Bound.UPPER
    applicable: bool = True
    verdict: Verdict
    worst: Optional[float] = None
    violations: List[int] = Field(default_factory=list, description="indices of failing points")
    residuals: List[float] = Field(default_factory=list)
    note: str = ""

    @classmethod
    def from_residuals(
        cls,
        name: str,
        tier: Tier,
        residuals: Sequence[float],
        tolerance: Optional[float] = None,
        bound: Bound = Bound.UPPER,
        note: str = "",
        override: Optional[float] = None,
    ) -> "ClauseResult":
        """
        Judge per-point residuals against a tolerance.

        Args:
            name: Clause name
            tier: Tolerance tier
            residuals: One non-negative number per sampled point
            tolerance: Explicit tolerance (takes precedence over the tier)
            bound: Whether residuals must stay below or above the tolerance
            note: Free-text remark carried into the report
            override: Command-line tolerance override (upper bounds only)

        Returns:
            ClauseResult with worst value, failing indices and verdict
        """
        # command-line overrides loosen or tighten residual bounds, never lower-bound thresholds
        if override is not None and bound == Bound.UPPER:
            tol = override
        elif tolerance is not None:
            tol = tolerance
        else:
            tol = tolerance_for(tier)
        values = [float(r) for r in residuals]
        if bound == Bound.UPPER:
            failing = [k for k, r in enumerate(values) if not r < tol]
            worst = max(values) if values else None
        else:
            failing = [k for k, r in enumerate(values) if not r > tol]
            worst = min(values) if values else None
        return cls(
            name=name,
            tier=tier,
            tolerance=tol,
            bound=bound,
            verdict=Verdict.FAIL if failing else Verdict.PASS,
            worst=worst,
            violations=failing,
            residuals=values,
            note=note,
        )

    @classmethod
    def not_applicable(cls, name: str, tier: Tier, note: str, override: Optional[float] = None) -> "ClauseResult":
        return cls(
            name=name,
            tier=tier,
            tolerance=tolerance_for(tier, override),
            applicable=False,
            verdict=Verdict.NOT_APPLICABLE,
            note=note,
        )

    @property
    def passed(self) -> bool:
        return self.verdict != Verdict.FAIL

    def rejudged(self, tolerance: float) -> "ClauseResult":
        if not self.applicable or self.bound != Bound.UPPER:
            return self
        return ClauseResult.from_residuals(
            self.name, self.tier, self.residuals, tolerance=tolerance, note=self.note
        )


class CheckReport(BaseModel):
    """Outcome of one named check on one geometry."""

    name: str
    geometry: str
    samples: int
    seed: Optional[int] = None
    points: List[List[float]] = Field(default_factory=list)
    hypotheses: List[ClauseResult] = Field(
        default_factory=list, description="gates; they select clauses but never fail the check"
    )
    clauses: List[ClauseResult] = Field(default_factory=list)
    pinned: Dict[str, Any] = Field(default_factory=dict)
    vacuous: bool = False
    verdict: Verdict = Verdict.PASS

    @classmethod
    def assemble(
        cls,
        name: str,
        geometry: str,
        points: Sequence[Sequence[float]],
        clauses: List[ClauseResult],
        seed: Optional[int] = None,
        hypotheses: Optional[List[ClauseResult]] = None,
        pinned: Optional[Dict[str, Any]] = None,
    ) -> "CheckReport":
        applicable = [c for c in clauses if c.applicable]
        failed = any(c.verdict == Verdict.FAIL for c in applicable)
        return cls(
            name=name,
            geometry=geometry,
            samples=len(points),
            seed=seed,
            points=[[float(x) for x in p] for p in points],
            hypotheses=hypotheses or [],
            clauses=clauses,
            pinned=pinned or {},
            vacuous=not applicable,
            verdict=Verdict.FAIL if failed else Verdict.PASS,
        )

    def clause(self, name: str) -> ClauseResult:
        for clause in self.clauses + self.hypotheses:
            if clause.name == name:
                return clause
        raise KeyError(name)

    @property
    def failing_clauses(self) -> List[str]:
        return [c.name for c in self.clauses if c.verdict == Verdict.FAIL]

    def with_tier_overrides(self, overrides: Dict[Tier, float]) -> "CheckReport":
        """Re-judge upper-bound clauses of the given tiers against new tolerances."""
        if not overrides:
            return self
        clauses = [
            c.rejudged(overrides[c.tier]) if c.tier in overrides else c for c in self.clauses
        ]
        return CheckReport.assemble(
            self.name, self.geometry, self.points, clauses, self.seed, self.hypotheses, self.pinned
        )
