"""
Services package.
Orchestration layer between the CLI and the algebra.
"""
from whitehead.services.analysis_service import analysis_service
from whitehead.services.cache_service import cache_service
from whitehead.services.check_service import check_service

__all__ = [
    "analysis_service",
    "cache_service",
    "check_service",
]
