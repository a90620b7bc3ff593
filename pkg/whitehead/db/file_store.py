"""
Directory-backed key-value store with the same surface as RedisClient.

Each key is one UTF-8 JSON file; ':' in keys becomes '__' in file names.
"""
import fnmatch
import json
import logging
from pathlib import Path
from typing import Any, List, Optional

logger = logging.getLogger(__name__)


class FileStore:
    """JSON files in a cache directory."""

    def __init__(self, directory: str):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.directory / (key.replace(":", "__") + ".json")

    def keys(self) -> List[str]:
        return sorted(path.stem.replace("__", ":") for path in self.directory.glob("*.json"))

    def get(self, key: str) -> Optional[Any]:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            logger.warning("Ignoring unreadable cache entry %s", path)
            return None

    def set(self, key: str, value: Any, ttl: Optional[int] = None) -> bool:
        """Write value; ttl is accepted for interface parity and ignored."""
        path = self._path(key)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(value if isinstance(value, str) else json.dumps(value), encoding="utf-8")
        tmp.replace(path)
        return True

    def delete(self, key: str) -> bool:
        path = self._path(key)
        if path.exists():
            path.unlink()
        return True

    def exists(self, key: str) -> bool:
        return self._path(key).exists()

    def clear_pattern(self, pattern: str) -> int:
        """Delete all keys matching a glob-style pattern."""
        removed = 0
        for key in self.keys():
            if fnmatch.fnmatchcase(key, pattern):
                self._path(key).unlink()
                removed += 1
        return removed
