"""Run specifications, run reports, search reports and golden digests.

Reports are serialized canonically: fields in definition order, floats with
17 significant digits, so equal runs produce identical bytes.
"""

import json
import math
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from neutral4 import __version__
from neutral4.schemas.report import SCHEMA_VERSION, CheckReport, Tier, Verdict


class SuiteSpec(BaseModel):
    """Schema for one suite run."""

    suite: str
    geometry: str = Field(..., description="builtin model name or path to a .geom file")
    params: Dict[str, float] = Field(default_factory=dict)
    samples: int = 100
    seed: Optional[int] = None
    seed_source: str = "given"
    tol: Optional[float] = Field(None, description="override for every upper-bound clause")
    tier_tolerances: Dict[Tier, float] = Field(default_factory=dict)


class RunReport(BaseModel):
    """Schema for the outcome of a suite run."""

    schema_version: int = SCHEMA_VERSION
    tool_version: str = __version__
    spec: SuiteSpec
    checks: List[CheckReport] = Field(default_factory=list)
    expected_failures: List[str] = Field(default_factory=list)
    verdict: Verdict = Verdict.PASS
    wall_time: float = Field(0.0, exclude=True)

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS


class FieldPairReport(BaseModel):
    """Per-point residuals of a pair of vector fields (K, L)."""

    geometry: str
    k: str
    l: str
    seed: Optional[int] = None
    points: List[List[float]] = Field(default_factory=list)
    residuals: Dict[str, List[float]] = Field(default_factory=dict)

    def worst(self, name: str) -> float:
        return max(self.residuals[name])


class InoueConstants(BaseModel):
    """Eigendata of N and the translation constants of the S+ generators."""

    n: List[List[int]]
    alpha: float
    a: List[float]
    b: List[float]
    p: int
    q: int
    r: int
    t1: float
    t2: float
    epsilon: int
    e: List[float]
    c: List[float]
    cc_residual: float


class HopfSearchReport(BaseModel):
    """Multi-start search for an admissible null Killing pair on S^1 x SU(2)."""

    mode: str = "commuting"
    attempts: int
    seed: int
    threshold: float
    residuals: List[float] = Field(default_factory=list, description="best residual per attempt")
    evaluations: List[int] = Field(default_factory=list)
    minimum: float
    no_solution_found: bool
    conclusion: str
    control_residual: Optional[float] = None


class ClauseDigest(BaseModel):
    name: str
    verdict: Verdict
    applicable: bool
    tolerance: float


class CheckDigest(BaseModel):
    name: str
    verdict: Verdict
    vacuous: bool
    clauses: List[ClauseDigest] = Field(default_factory=list)
    pinned: Dict[str, Any] = Field(default_factory=dict)


class GoldenDigest(BaseModel):
    """The pinned part of a run: spec, verdicts, tolerances and pinned scalars."""

    schema_version: int = SCHEMA_VERSION
    tool_version: str = __version__
    spec: SuiteSpec
    verdict: Verdict
    checks: List[CheckDigest] = Field(default_factory=list)

    @classmethod
    def from_run(cls, run: RunReport) -> "GoldenDigest":
        return cls(
            spec=run.spec,
            verdict=run.verdict,
            checks=[
                CheckDigest(
                    name=check.name,
                    verdict=check.verdict,
                    vacuous=check.vacuous,
                    clauses=[
                        ClauseDigest(
                            name=c.name,
                            verdict=c.verdict,
                            applicable=c.applicable,
                            tolerance=c.tolerance,
                        )
                        for c in check.hypotheses + check.clauses
                    ],
                    pinned=check.pinned,
                )
                for check in run.checks
            ],
        )


# Canonical JSON ------------------------------------------------------------


def format_float(value: float) -> str:
    if math.isnan(value):
        return '"NaN"'
    if math.isinf(value):
        return '"Infinity"' if value > 0 else '"-Infinity"'
    text = format(value, ".17g")
    if all(ch not in text for ch in ".en"):
        text += ".0"
    return text


def _encode(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + f"\n{end}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in value) + "]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{end}]"
    raise TypeError(f"cannot encode {type(value).__name__}")


def canonical_json(model: BaseModel, indent: int = 2) -> str:
    """Serialize a model with 17 significant digits and fields in definition order."""
    return _encode(model.model_dump(mode="json"), indent, 0) + "\n"


def load_json(text: str) -> Any:
    return json.loads(text)
