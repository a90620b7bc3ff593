"""
Redis backend for the poset cache.

Values are JSON documents. An unconnected client answers every call as a
miss, so the toolkit runs unchanged without a server.
"""
import json
import logging
from typing import Any, Optional

import redis

from whitehead.core.config import settings

logger = logging.getLogger(__name__)


class RedisClient:
    """Synchronous Redis wrapper with the FileStore surface."""

    def __init__(self, client: Optional[redis.Redis] = None):
        self.client: Optional[redis.Redis] = client

    def connect(self) -> None:
        self.client = redis.Redis.from_url(settings.redis_url, encoding="utf-8", decode_responses=True)
        logger.info("Redis cache at %s:%s db %s", settings.redis_host, settings.redis_port, settings.redis_db)

    def disconnect(self) -> None:
        if self.client is None:
            return
        self.client.close()
        self.client = None
        logger.info("Redis cache disconnected")

    def ping(self) -> bool:
        """True when a server answers."""
        return self.client is not None and bool(self.client.ping())

    def get(self, key: str) -> Optional[Any]:
        """
        Fetch and decode one document.

        Returns:
            The decoded JSON value, or None when absent or not JSON
        """
        if self.client is None:
            return None
        raw = self.client.get(key)
        if raw is None:
            return None
        try:
            return json.loads(raw)
        except json.JSONDecodeError:
            logger.warning("Ignoring non-JSON cache entry %s", key)
            return None

    def set(self, key: str, value: Any, ttl: Optional[int] = None) -> bool:
        """
        Store a JSON-serializable value.

        Args:
            key: Cache key
            value: Document to store
            ttl: Seconds to keep it; None uses settings, 0 keeps it forever
        """
        if self.client is None:
            return False
        expiry = settings.redis_cache_ttl if ttl is None else ttl
        payload = json.dumps(value)
        if expiry > 0:
            self.client.setex(key, expiry, payload)
        else:
            self.client.set(key, payload)
        return True

    def delete(self, key: str) -> bool:
        if self.client is None:
            return False
        return bool(self.client.delete(key))

    def exists(self, key: str) -> bool:
        return self.client is not None and bool(self.client.exists(key))

    def clear_pattern(self, pattern: str) -> int:
        """Delete every key matching a glob pattern such as "poset:*"; returns the count."""
        if self.client is None:
            return 0
        matched = list(self.client.scan_iter(match=pattern))
        if not matched:
            return 0
        return int(self.client.delete(*matched) or 0)


# Global Redis client instance
redis_client = RedisClient()
