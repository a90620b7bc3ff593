"""
Pydantic models package.
"""
from whitehead.models.requests import GraphDocument
from whitehead.models.responses import (
    BettiReport,
    CheckReport,
    CheckResult,
    E1Report,
    E1RowReport,
    ErrorResponse,
    GraphSummary,
    PhiReport,
    PosetDocument,
    PresentationDocument,
    RankRow,
    RelationItem,
    Report,
    RingCensus,
)

__all__ = [
    "GraphDocument",
    "BettiReport",
    "CheckReport",
    "CheckResult",
    "E1Report",
    "E1RowReport",
    "ErrorResponse",
    "GraphSummary",
    "PhiReport",
    "PosetDocument",
    "PresentationDocument",
    "RankRow",
    "RelationItem",
    "Report",
    "RingCensus",
]
