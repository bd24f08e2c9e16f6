"""Content-addressed store for rank results.

Keys are tuples such as (algebra fingerprint, direction, coefficients, n,
slice key, filtration tag).  Values are JSON-serializable (integers or lists
of integer pairs).  On disk every entry carries a SHA-256 checksum over its
key and value; entries that fail to parse or verify are deleted and
recomputed, never trusted.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

__all__ = ["RankCache", "default_cache", "set_default_cache", "CACHE_VERSION"]

CACHE_VERSION = 1


def _key_text(key) -> str:
    return json.dumps(key, sort_keys=True, default=str, separators=(",", ":"))


def _checksum(key_text: str, value_text: str) -> str:
    return hashlib.sha256(f"v{CACHE_VERSION}\0{key_text}\0{value_text}".encode()).hexdigest()


class RankCache:
    """In-memory cache, optionally backed by a directory."""

    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else None
        self._mem: dict[str, object] = {}
        self.hits = 0
        self.misses = 0
        self.rejected = 0
        if self.directory is not None:
            (self.directory / f"v{CACHE_VERSION}").mkdir(parents=True, exist_ok=True)

    def _path(self, key_text: str) -> Path:
        h = hashlib.sha256(key_text.encode()).hexdigest()
        return self.directory / f"v{CACHE_VERSION}" / h[:2] / f"{h[2:]}.json"

    def get(self, key):
        kt = _key_text(key)
        if kt in self._mem:
            self.hits += 1
            return self._mem[kt]
        if self.directory is not None:
            path = self._path(kt)
            if path.exists():
                try:
                    doc = json.loads(path.read_text())
                    vt = json.dumps(doc["value"], separators=(",", ":"))
                    if doc["key"] != kt or doc["checksum"] != _checksum(kt, vt):
                        raise ValueError("checksum mismatch")
                except (ValueError, KeyError, TypeError):
                    self.rejected += 1
                    path.unlink(missing_ok=True)
                else:
                    self.hits += 1
                    self._mem[kt] = doc["value"]
                    return doc["value"]
        self.misses += 1
        return None

    def put(self, key, value) -> None:
        kt = _key_text(key)
        self._mem[kt] = value
        if self.directory is None:
            return
        vt = json.dumps(value, separators=(",", ":"))
        path = self._path(kt)
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = {"key": kt, "value": value, "checksum": _checksum(kt, vt)}
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, separators=(",", ":"))
        os.replace(tmp, path)

    def entry_paths(self) -> list[Path]:
        if self.directory is None:
            return []
        return sorted((self.directory / f"v{CACHE_VERSION}").glob("*/*.json"))

    def clear_memory(self) -> None:
        self._mem.clear()


_DEFAULT = RankCache()


def default_cache() -> RankCache:
    return _DEFAULT


def set_default_cache(cache: RankCache) -> None:
    global _DEFAULT
    _DEFAULT = cache
