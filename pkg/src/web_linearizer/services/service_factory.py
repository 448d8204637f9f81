"""Service Factory: one obstruction tower and one pipeline service per process."""

from typing import Optional
import logging

from .linearization_service import LinearizationService
from ..analysis.obstruction import ObstructionTower, TowerBuilder
from ..config import PipelineConfig, settings
from ..data.cache import TowerCache

logger = logging.getLogger(__name__)


class ServiceFactory:
    """Factory for creating and managing service instances."""

    _tower: Optional[ObstructionTower] = None
    _tower_from_cache: bool = False
    _cache_dir: Optional[str] = None
    _service: Optional[LinearizationService] = None

    @classmethod
    def get_tower_cache(cls, cache_dir: Optional[str] = None) -> TowerCache:
        return TowerCache(cache_dir or cls._cache_dir or settings.cache_dir)

    @classmethod
    def get_tower(cls, cache_dir: Optional[str] = None, rebuild: bool = False) -> ObstructionTower:
        """Load the tower from the cache, building and saving it when needed.

        Args:
            cache_dir: Cache directory (defaults to settings.cache_dir)
            rebuild: Ignore any cached tower

        Returns:
            The obstruction tower
        """
        cache_dir = cache_dir or cls._cache_dir or settings.cache_dir
        if cls._tower is not None and not rebuild and cache_dir == cls._cache_dir:
            return cls._tower

        cache = TowerCache(cache_dir)
        cls._tower, cls._tower_from_cache = cache.get_or_build(lambda: TowerBuilder().build(), rebuild=rebuild)
        cls._cache_dir = cache_dir
        logger.info(f"Obstruction tower ready ({'cache hit' if cls._tower_from_cache else 'built'})")
        return cls._tower

    @classmethod
    def tower_from_cache(cls) -> bool:
        return cls._tower_from_cache

    @classmethod
    def get_linearization_service(cls, config: Optional[PipelineConfig] = None,
                                  force_new: bool = False) -> LinearizationService:
        """Get or create the pipeline service; its tower is loaded on first use."""
        if cls._service is None or force_new or config is not None:
            config = config or PipelineConfig()
            cls._service = LinearizationService(lambda: cls.get_tower(config.cache_dir), config)
            logger.debug(f"Created LinearizationService with {config.to_dict()}")
        return cls._service

    @classmethod
    def reset_services(cls) -> None:
        """Reset all service instances (useful for testing)."""
        cls._tower = None
        cls._tower_from_cache = False
        cls._cache_dir = None
        cls._service = None
        logger.info("Reset all service instances")

    @classmethod
    def configure_for_testing(cls, cache_dir: str, tower: Optional[ObstructionTower] = None) -> None:
        """Point the factory at a test cache; an already built tower is reused."""
        cls.reset_services()
        settings.cache_dir = cache_dir
        cls._cache_dir = cache_dir
        if tower is not None:
            cls._tower = tower
        logger.info(f"Configured services for testing with cache {cache_dir}")
