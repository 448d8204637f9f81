"""Persistence of the obstruction tower and memoisation of evaluated ladders.

The tower is stored as canonical text, one file per named entry, next to a
manifest that records the pipeline version hash. Any mismatch or parse
failure regenerates the tower.
"""

import hashlib
import json
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple, Union
import logging

from ..analysis.obstruction import ObstructionTower, pipeline_versions
from ..exceptions import CacheError

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"


class CacheEntry:
    """Represents a single cache entry with metadata."""

    def __init__(self, data: Any, metadata: Optional[Dict] = None):
        self.data = data
        self.created_at = time.time()
        self.metadata = metadata or {}
        self.access_count = 0
        self.last_accessed = self.created_at

    def access(self) -> Any:
        """Mark the entry as accessed and return data."""
        self.access_count += 1
        self.last_accessed = time.time()
        return self.data


class InMemoryCache:
    """LRU cache for evaluated ladders, keyed by (f, point, mode)."""

    def __init__(self, max_size: int = 64):
        self.max_size = max_size
        self._cache: Dict[str, CacheEntry] = {}
        self._stats = {"hits": 0, "misses": 0, "evictions": 0}

    def _make_key(self, key: Union[str, tuple]) -> str:
        if isinstance(key, tuple):
            return hashlib.md5(str(key).encode()).hexdigest()
        return str(key)

    def get(self, key: Union[str, tuple], default: Any = None) -> Any:
        str_key = self._make_key(key)
        if str_key not in self._cache:
            self._stats["misses"] += 1
            return default
        self._stats["hits"] += 1
        return self._cache[str_key].access()

    def set(self, key: Union[str, tuple], value: Any, metadata: Optional[Dict] = None) -> None:
        str_key = self._make_key(key)
        if len(self._cache) >= self.max_size and str_key not in self._cache:
            self._evict_lru()
        self._cache[str_key] = CacheEntry(value, metadata)

    def get_or_compute(self, key: Union[str, tuple], compute: Callable[[], Any]) -> Any:
        sentinel = object()
        value = self.get(key, sentinel)
        if value is sentinel:
            value = compute()
            self.set(key, value)
        return value

    def clear(self) -> None:
        self._cache.clear()
        self._stats = {k: 0 for k in self._stats}

    def _evict_lru(self) -> None:
        if not self._cache:
            return
        lru_key = min(self._cache, key=lambda k: self._cache[k].last_accessed)
        del self._cache[lru_key]
        self._stats["evictions"] += 1

    def get_stats(self) -> Dict[str, Any]:
        total = self._stats["hits"] + self._stats["misses"]
        return {
            "entries": len(self._cache),
            "max_size": self.max_size,
            "hit_rate": self._stats["hits"] / total if total > 0 else 0,
            "total_hits": self._stats["hits"],
            "total_misses": self._stats["misses"],
            "evictions": self._stats["evictions"],
        }


class FileCacheBackend:
    """Text files under a directory, one per key, with md5-hashed names."""

    def __init__(self, cache_dir: str):
        self.cache_dir = Path(cache_dir)
        try:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise CacheError(str(self.cache_dir), str(e))
        logger.debug(f"Initialized file cache at {self.cache_dir}")

    def _get_file_path(self, key: str) -> Path:
        safe_key = hashlib.md5(key.encode()).hexdigest()
        return self.cache_dir / f"{safe_key}.txt"

    def get(self, key: str) -> Optional[str]:
        """Stored text for the key; corrupted files are removed."""
        file_path = self._get_file_path(key)
        if not file_path.exists():
            return None
        try:
            cache_data = json.loads(file_path.read_text(encoding="utf-8"))
            if not isinstance(cache_data, dict) or cache_data.get("key") != key or "data" not in cache_data:
                raise ValueError("unexpected structure")
            return cache_data["data"]
        except Exception as e:
            logger.warning(f"Removing corrupted cache file {file_path}: {e}")
            try:
                file_path.unlink()
            except OSError:
                pass
            return None

    def set(self, key: str, value: str, metadata: Optional[Dict] = None) -> bool:
        file_path = self._get_file_path(key)
        cache_data = {"key": key, "data": value, "metadata": metadata or {}}
        try:
            file_path.write_text(json.dumps(cache_data, sort_keys=True), encoding="utf-8")
            return True
        except OSError as e:
            logger.error(f"Error writing cache file {file_path}: {e}")
            return False

    def delete(self, key: str) -> bool:
        file_path = self._get_file_path(key)
        try:
            if file_path.exists():
                file_path.unlink()
                return True
        except OSError as e:
            logger.error(f"Error deleting cache file {file_path}: {e}")
        return False

    def clear(self) -> int:
        removed = 0
        for file_path in self.cache_dir.glob("*.txt"):
            file_path.unlink()
            removed += 1
        return removed

    def get_cache_info(self) -> Dict[str, Any]:
        cache_files = list(self.cache_dir.glob("*.txt"))
        total_size = sum(f.stat().st_size for f in cache_files)
        newest = max((f.stat().st_mtime for f in cache_files), default=None)
        return {
            "cache_dir": str(self.cache_dir),
            "file_count": len(cache_files),
            "total_size_kb": total_size / 1024,
            "newest_file": datetime.fromtimestamp(newest).isoformat(timespec="seconds") if newest else None,
        }


def version_hash(versions: Optional[Dict[str, str]] = None) -> str:
    """Hash of the rule and pipeline version constants."""
    versions = versions if versions is not None else pipeline_versions()
    return hashlib.md5(json.dumps(versions, sort_keys=True).encode()).hexdigest()


class TowerCache:
    """The obstruction tower on disk, validated against the current pipeline version."""

    def __init__(self, cache_dir: str):
        self.root = Path(cache_dir) / "tower"
        self.files = FileCacheBackend(str(self.root))
        self.manifest_path = self.root / MANIFEST

    def _read_manifest(self) -> Optional[dict]:
        if not self.manifest_path.exists():
            return None
        try:
            return json.loads(self.manifest_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"Unreadable tower manifest {self.manifest_path}: {e}")
            return None

    def load(self) -> Optional[ObstructionTower]:
        """The cached tower, or None when it is missing, stale or corrupted."""
        manifest = self._read_manifest()
        if manifest is None:
            return None
        if manifest.get("version_hash") != version_hash():
            logger.warning("Tower cache was written by another pipeline version; rebuilding")
            self.invalidate()
            return None
        entries = {}
        for name in manifest.get("entries", []):
            text = self.files.get(name)
            if text is None:
                logger.warning(f"Tower cache entry {name} is missing; rebuilding")
                self.invalidate()
                return None
            entries[name] = text
        try:
            tower = ObstructionTower.from_entries(entries, manifest.get("provenance", {}))
        except Exception as e:
            logger.warning(f"Tower cache failed to parse ({e}); rebuilding")
            self.invalidate()
            return None
        logger.info(f"Loaded obstruction tower from {self.root}")
        return tower

    def save(self, tower: ObstructionTower) -> None:
        entries = tower.to_entries()
        for name, text in entries.items():
            if not self.files.set(name, text):
                raise CacheError(str(self.root), f"could not write entry {name}")
        manifest = {
            "version_hash": version_hash(),
            "versions": pipeline_versions(),
            "entries": sorted(entries),
            "provenance": tower.provenance,
        }
        try:
            self.manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8")
        except OSError as e:
            raise CacheError(str(self.manifest_path), str(e))
        logger.info(f"Saved obstruction tower to {self.root}")

    def invalidate(self) -> None:
        removed = self.files.clear()
        if self.manifest_path.exists():
            self.manifest_path.unlink()
        logger.debug(f"Removed {removed} tower cache files")

    def get_or_build(self, build: Callable[[], ObstructionTower], rebuild: bool = False) -> Tuple[ObstructionTower, bool]:
        """The tower and whether it came from the cache."""
        if not rebuild:
            tower = self.load()
            if tower is not None:
                return tower, True
        tower = build()
        self.save(tower)
        return tower, False

    def info(self) -> Dict[str, Any]:
        manifest = self._read_manifest() or {}
        return {
            **self.files.get_cache_info(),
            "manifest": manifest.get("versions"),
            "current": manifest.get("version_hash") == version_hash(),
        }
