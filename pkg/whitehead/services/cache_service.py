"""
Cache service for enumerated posets.
"""
import hashlib
import logging
from typing import Any, Optional, Protocol

from pydantic import ValidationError
from redis.exceptions import RedisError

from whitehead.core.config import settings
from whitehead.core.errors import DomainError
from whitehead.db.file_store import FileStore
from whitehead.db.redis_client import redis_client
from whitehead.domain.graph import Graph, canonical_form
from whitehead.domain.poset import WhiteheadPoset
from whitehead.models.responses import PosetDocument

logger = logging.getLogger(__name__)


class CacheBackend(Protocol):
    def get(self, key: str) -> Optional[Any]: ...

    def set(self, key: str, value: Any, ttl: Optional[int] = None) -> bool: ...

    def delete(self, key: str) -> bool: ...

    def exists(self, key: str) -> bool: ...

    def clear_pattern(self, pattern: str) -> int: ...


def select_backend(cache_dir: Optional[str] = None) -> Optional[CacheBackend]:
    """
    Pick the storage backend.

    Args:
        cache_dir: Directory from the command line; wins over settings

    Returns:
        FileStore, the connected Redis client, or None when caching is off
    """
    if cache_dir:
        return FileStore(cache_dir)
    if settings.cache_backend == "file" and settings.cache_dir:
        return FileStore(settings.cache_dir)
    if settings.cache_backend == "redis":
        redis_client.connect()
        try:
            if redis_client.ping():
                return redis_client
        except RedisError as exc:
            logger.warning("Redis unreachable, caching disabled: %s", exc)
        redis_client.disconnect()
    return None


class CacheService:
    """Stores serialized posets keyed by the reduced graph."""

    def __init__(self, backend: Optional[CacheBackend] = None):
        self.backend = backend

    @staticmethod
    def _generate_cache_key(prefix: str, identifier: str) -> str:
        """
        Generate a cache key with prefix.

        Args:
            prefix: Key prefix (e.g., 'poset')
            identifier: Unique identifier

        Returns:
            Cache key string
        """
        if len(identifier) > 100:
            identifier = hashlib.sha256(identifier.encode()).hexdigest()
        return f"{prefix}:{identifier}"

    @staticmethod
    def _generate_poset_key(graph: Graph) -> str:
        # labels are part of the key: relabelled graphs have other minimal elements
        digest = hashlib.sha256(canonical_form(graph).encode()).hexdigest()
        return CacheService._generate_cache_key("poset", digest)

    def get_poset(self, graph: Graph) -> Optional[WhiteheadPoset]:
        """
        Get a cached poset.

        Returns:
            The poset, or None on a miss or an unreadable entry
        """
        if self.backend is None:
            return None
        key = self._generate_poset_key(graph)
        try:
            document = self.backend.get(key)
        except RedisError as exc:
            logger.warning("Cache backend unavailable: %s", exc)
            return None
        if document is None:
            logger.info("Cache miss for %s", key)
            return None
        try:
            poset = WhiteheadPoset.from_document(PosetDocument.model_validate(document))
        except (ValidationError, DomainError) as exc:
            logger.warning("Discarding cache entry %s: %s", key, exc)
            return None
        if poset.graph != graph:
            logger.warning("Cache entry %s belongs to another graph", key)
            return None
        logger.info("Cache hit for %s (%d elements)", key, len(poset))
        return poset

    def set_poset(self, graph: Graph, poset: WhiteheadPoset, ttl: Optional[int] = None) -> bool:
        """Cache a poset; returns False when caching is off."""
        if self.backend is None:
            return False
        key = self._generate_poset_key(graph)
        try:
            return self.backend.set(key, poset.to_document().model_dump(mode="json"), ttl)
        except RedisError as exc:
            logger.warning("Cache backend unavailable: %s", exc)
            return False

    def invalidate(self, graph: Graph) -> bool:
        if self.backend is None:
            return False
        return self.backend.delete(self._generate_poset_key(graph))

    def clear_all(self) -> int:
        """Clear every cached poset."""
        if self.backend is None:
            return 0
        return self.backend.clear_pattern("poset:*")


# Global cache service instance
cache_service = CacheService()
