from neutral4.schemas.models import (
    FieldPairReport,
    GoldenDigest,
    HopfSearchReport,
    InoueConstants,
    RunReport,
    SuiteSpec,
    canonical_json,
)
from neutral4.schemas.report import Bound, CheckReport, ClauseResult, Tier, Verdict

__all__ = [
    "Bound",
    "CheckReport",
    "ClauseResult",
    "FieldPairReport",
    "GoldenDigest",
    "HopfSearchReport",
    "InoueConstants",
    "RunReport",
    "SuiteSpec",
    "Tier",
    "Verdict",
    "canonical_json",
]
