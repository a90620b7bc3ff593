"""
Workers package.
Process-pool helpers for enumeration and per-element tests.
"""
from whitehead.workers.processor import ChunkProcessor

__all__ = ["ChunkProcessor"]
