"""Content-addressed result cache on the local file system."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from . import __version__

log = logging.getLogger(__name__)

ENV_CACHE_DIR = "COMMDOM_CACHE_DIR"


@dataclass(frozen=True)
class CacheEntry:
    key: str
    value: dict
    tool_version: str = __version__


def cache_key(*parts) -> str:
    blob = json.dumps(parts, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class ResultCache:
    """JSON files named by key; a ``None`` directory makes every call a no-op."""

    def __init__(self, directory: Optional[str | Path]):
        self.directory = Path(directory) if directory else None

    @classmethod
    def from_env(cls, flag: Optional[str] = None) -> ResultCache:
        return cls(flag or os.environ.get(ENV_CACHE_DIR) or None)

    @property
    def enabled(self) -> bool:
        return self.directory is not None

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, key: str) -> Optional[dict]:
        if not self.enabled:
            return None
        path = self._path(key)
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return None
        except (OSError, ValueError) as exc:
            log.warning("ignoring unreadable cache entry %s: %s", path, exc)
            return None
        if not isinstance(obj, dict) or obj.get("key") != key or obj.get("tool_version") != __version__:
            return None
        value = obj.get("value")
        return value if isinstance(value, dict) else None

    def put(self, entry: CacheEntry) -> None:
        if not self.enabled:
            return
        path = self._path(entry.key)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(
                json.dumps({"key": entry.key, "tool_version": entry.tool_version, "value": entry.value}),
                encoding="utf-8",
            )
            os.replace(tmp, path)
        except OSError as exc:
            log.warning("cache disabled after write failure: %s", exc)
            self.directory = None

    def get_or_compute(self, key: str, compute: Callable[[], dict]) -> tuple[dict, bool]:
        """Return ``(value, hit)``; a miss or a corrupt entry recomputes and overwrites."""
        hit = self.get(key)
        if hit is not None:
            return hit, True
        value = compute()
        self.put(CacheEntry(key, value))
        return value, False
