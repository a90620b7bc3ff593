"""
Exception hierarchy.

Every error carries the same three fields as the ErrorResponse model
(error type, human message, optional detail) plus the process exit code
the CLI maps it to.
"""
from typing import Any, Optional

from whitehead.models.responses import ErrorResponse


class WhiteheadError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1

    def __init__(self, message: str, detail: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    @property
    def error(self) -> str:
        return type(self).__name__

    def to_response(self) -> ErrorResponse:
        """Render the error as the standard error document."""
        return ErrorResponse(error=self.error, message=self.message, detail=self.detail)


class GraphParseError(WhiteheadError):
    """Malformed graph input."""

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, detail={"line": line} if line is not None else None)


class DomainError(WhiteheadError):
    """An operation was called outside its domain."""

    exit_code = 2


class GraphDomainError(DomainError):
    pass


class PartitionDomainError(DomainError):
    pass


class IncompatibleGeneratorsError(DomainError):
    """A generator set has no cone point."""


class ChainComplexError(DomainError):
    """Inconsistent dimensions or d∘d ≠ 0."""


class PresentationError(DomainError):
    pass


class ResourceCapError(WhiteheadError):
    """Poset enumeration exceeded the element cap."""

    exit_code = 3

    def __init__(self, cap: int, partial_count: int):
        self.cap = cap
        self.partial_count = partial_count
        super().__init__(
            f"poset enumeration exceeded the cap of {cap} elements",
            detail={"cap": cap, "partial_count": partial_count},
        )


class CaseAnalysisError(WhiteheadError):
    """An element fell through every case guard of the degree-2 map."""

    exit_code = 1
