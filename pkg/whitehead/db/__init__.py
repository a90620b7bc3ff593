"""
Storage backends package.
Key-value stores holding serialized posets.
"""
from whitehead.db.file_store import FileStore
from whitehead.db.redis_client import RedisClient, redis_client

__all__ = [
    "FileStore",
    "RedisClient",
    "redis_client",
]
