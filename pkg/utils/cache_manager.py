"""
Spectrum cache for the Phase Estimation Lab

Dense eigendecompositions dominate setup cost, and every cell of a plan
that shares a Hamiltonian needs the same one. Entries are keyed by the
model kind and its normalized parameters.
"""

import hashlib
import json
import logging
import threading
import time
from dataclasses import dataclass, field
from functools import wraps
from typing import Any, Callable, Dict, List, Optional, Set, Union

import numpy as np

logger = logging.getLogger(__name__)

@dataclass
class CacheEntry:
    """A cached value with access metadata"""
    data: Any
    created_at: float
    access_count: int = 0
    last_accessed: float = field(default_factory=time.monotonic)
    tags: Set[str] = field(default_factory=set)
    size_bytes: int = 0

    def access(self):
        """Mark entry as accessed"""
        self.access_count += 1
        self.last_accessed = time.monotonic()

@dataclass
class CacheStats:
    """Cache performance statistics"""
    hits: int = 0
    misses: int = 0
    evictions: int = 0

    @property
    def hit_rate(self) -> float:
        """Hit rate as a percentage"""
        total = self.hits + self.misses
        return (self.hits / total * 100) if total > 0 else 0.0

class SpectrumCache:
    """
    Thread-safe LRU cache for spectral models:
    - parameter-normalized keys
    - tag-based invalidation (per model kind)
    - eviction by entry count
    """

    def __init__(self, max_entries: int = 16):
        self.max_entries = max_entries

        self._cache: Dict[str, CacheEntry] = {}
        self._lock = threading.RLock()
        self._stats = CacheStats()
        self._tag_map: Dict[str, Set[str]] = {}

    @staticmethod
    def _calculate_size(data: Any) -> int:
        """Rough memory footprint, counting numpy buffers"""
        arrays = [v for v in vars(data).values() if isinstance(v, np.ndarray)] if hasattr(data, "__dict__") else []
        if isinstance(data, np.ndarray):
            arrays = [data]
        return int(sum(a.nbytes for a in arrays))

    @staticmethod
    def _normalize_params(params: Dict[str, Any]) -> Dict[str, Any]:
        normalized = {}
        for key, value in params.items():
            if isinstance(value, float):
                # 17 digits so distinct floats never collide
                normalized[key] = format(value, ".17g")
            elif isinstance(value, (list, tuple)):
                normalized[key] = [format(v, ".17g") if isinstance(v, float) else v for v in value]
            elif isinstance(value, dict):
                normalized[key] = SpectrumCache._normalize_params(value)
            else:
                normalized[key] = value
        return normalized

    def _generate_cache_key(self, kind: str, params: Dict[str, Any]) -> str:
        """Deterministic cache key from model kind and parameters"""
        key_data = {"kind": kind, "params": self._normalize_params(params)}
        key_string = json.dumps(key_data, sort_keys=True, default=str)
        return hashlib.md5(key_string.encode()).hexdigest()

    def _evict_lru(self):
        """Evict least recently used entries down to max_entries"""
        with self._lock:
            overflow = len(self._cache) - self.max_entries
            if overflow <= 0:
                return
            oldest = sorted(self._cache.items(), key=lambda item: item[1].last_accessed)[:overflow]
            for cache_key, _ in oldest:
                self._remove_entry(cache_key)
                self._stats.evictions += 1

    def _remove_entry(self, cache_key: str):
        entry = self._cache.pop(cache_key, None)
        if entry is None:
            return
        for tag in entry.tags:
            keys = self._tag_map.get(tag)
            if keys is not None:
                keys.discard(cache_key)
                if not keys:
                    del self._tag_map[tag]

    def get(self, kind: str, params: Dict[str, Any]) -> Optional[Any]:
        """Return the cached value or None"""
        cache_key = self._generate_cache_key(kind, params)

        with self._lock:
            entry = self._cache.get(cache_key)
            if entry is not None:
                entry.access()
                self._stats.hits += 1
                logger.debug(f"Cache HIT for {kind}: {cache_key[:8]}...")
                return entry.data

            self._stats.misses += 1
            logger.debug(f"Cache MISS for {kind}: {cache_key[:8]}...")
            return None

    def put(self, kind: str, params: Dict[str, Any], data: Any):
        """Store a value"""
        cache_key = self._generate_cache_key(kind, params)
        tags = {f"kind:{kind}"}
        size_bytes = self._calculate_size(data)

        with self._lock:
            self._remove_entry(cache_key)
            self._cache[cache_key] = CacheEntry(
                data=data,
                created_at=time.monotonic(),
                tags=tags,
                size_bytes=size_bytes
            )
            for tag in tags:
                self._tag_map.setdefault(tag, set()).add(cache_key)

            logger.debug(f"Cache PUT for {kind}: {cache_key[:8]}... ({size_bytes} bytes)")
            self._evict_lru()

    def invalidate_by_tags(self, tags: Union[str, List[str]]):
        """Invalidate cache entries by tags"""
        if isinstance(tags, str):
            tags = [tags]

        with self._lock:
            keys_to_remove = set()
            for tag in tags:
                keys_to_remove.update(self._tag_map.get(tag, ()))
            for cache_key in keys_to_remove:
                self._remove_entry(cache_key)

            if keys_to_remove:
                logger.info(f"Invalidated {len(keys_to_remove)} cache entries for tags: {tags}")

    def invalidate_all(self):
        """Clear all cache entries"""
        with self._lock:
            self._cache.clear()
            self._tag_map.clear()
            self._stats = CacheStats()
            logger.info("Spectrum cache cleared")

    def __len__(self) -> int:
        return len(self._cache)

    def get_stats(self) -> Dict[str, Any]:
        """Cache statistics"""
        with self._lock:
            return {
                "hits": self._stats.hits,
                "misses": self._stats.misses,
                "hit_rate": round(self._stats.hit_rate, 2),
                "evictions": self._stats.evictions,
                "total_entries": len(self._cache),
                "total_size_mb": round(sum(e.size_bytes for e in self._cache.values()) / (1024 * 1024), 2),
                "tag_distribution": {tag: len(keys) for tag, keys in self._tag_map.items()},
            }

# Global cache instance
_spectrum_cache = None
_cache_lock = threading.Lock()

def get_spectrum_cache() -> SpectrumCache:
    """Get singleton spectrum cache instance"""
    global _spectrum_cache

    if _spectrum_cache is None:
        with _cache_lock:
            if _spectrum_cache is None:
                from config.settings import bench_config
                _spectrum_cache = SpectrumCache(max_entries=bench_config.SPECTRUM_CACHE_MAX_ENTRIES)
                logger.info("Initialized global spectrum cache")

    return _spectrum_cache

def cached_spectrum(kind: str):
    """Decorator caching a spectrum builder on its keyword-normalized arguments"""
    def decorator(func: Callable):
        @wraps(func)
        def wrapper(*args, **kwargs):
            cache = get_spectrum_cache()
            names = func.__code__.co_varnames[:func.__code__.co_argcount]
            params = dict(zip(names, args))
            params.update(kwargs)

            cached_result = cache.get(kind, params)
            if cached_result is not None:
                return cached_result

            result = func(*args, **kwargs)
            if result is not None:
                cache.put(kind, params, result)
            return result
        return wrapper
    return decorator
