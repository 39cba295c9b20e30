"""Exception taxonomy.

Property violations found while checking a geometry are report content and
never raised. The exceptions below signal inputs that cannot be evaluated at
all; each carries the name of the operation that failed so the CLI can name
it when it exits with status 3.
"""

from typing import Optional


class Neutral4Error(Exception):
    """Base class for every error raised by the toolkit."""

    def __init__(self, message: str, operation: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.operation = operation

    def __str__(self) -> str:
        if self.operation:
            return f"{self.operation}: {self.message}"
        return self.message


class ExprSyntaxError(Neutral4Error):
    """Malformed expression or document text; `offset` is a byte offset."""

    def __init__(self, message: str, offset: int, operation: str = "parse_expression"):
        super().__init__(f"{message} at byte {offset}", operation)
        self.offset = offset


class UnknownSymbolError(Neutral4Error):
    def __init__(self, symbol: str, operation: str = "parse_expression"):
        super().__init__(f"unknown symbol '{symbol}'", operation)
        self.symbol = symbol


class DomainError(Neutral4Error):
    """Evaluation left the domain of log, sqrt or division."""

    def __init__(self, message: str, subexpression: str, operation: str = "evaluate_jet2"):
        super().__init__(f"{message} in '{subexpression}'", operation)
        self.subexpression = subexpression


class DocumentError(Neutral4Error):
    """Dimension, duplicate-name or metric-symmetry violation in a geometry document."""

    def __init__(self, message: str, operation: str = "parse_geometry"):
        super().__init__(message, operation)


class SingularMetricError(Neutral4Error):
    def __init__(self, condition: float, operation: str = "inverse_metric_at"):
        super().__init__(f"metric is singular (condition estimate {condition:.3e})", operation)
        self.condition = condition


class BackendMismatchError(Neutral4Error):
    def __init__(self, message: str, operation: str = "lie_bracket"):
        super().__init__(message, operation)


class DegenerateFrameError(Neutral4Error):
    def __init__(self, message: str, operation: str = "build_orthonormal_frame"):
        super().__init__(message, operation)


class PreconditionError(Neutral4Error):
    """A pointwise precondition failed; `condition` names it, `residual` measures it."""

    def __init__(self, condition: str, residual: float, operation: str = "complete_null_pair"):
        super().__init__(f"{condition} (residual {residual:.3e})", operation)
        self.condition = condition
        self.residual = residual


class AdmissibilityError(Neutral4Error):
    """Input forms violate an algebraic relation they are required to satisfy."""

    def __init__(self, relation: str, residual: float, operation: str):
        super().__init__(f"forms not admissible: {relation} (residual {residual:.3e})", operation)
        self.relation = relation
        self.residual = residual


class InoueParameterError(Neutral4Error):
    def __init__(self, message: str, operation: str = "inoue_constants"):
        super().__init__(message, operation)


class ImageOutOfDomainError(Neutral4Error):
    def __init__(self, point: str, operation: str = "pullback_metric"):
        super().__init__(f"image point {point} lies outside the domain box", operation)


class SpecResolutionError(Neutral4Error):
    """Unknown suite, geometry, parameter or model name; maps to exit status 2."""

    def __init__(self, message: str, operation: str = "resolve"):
        super().__init__(message, operation)
