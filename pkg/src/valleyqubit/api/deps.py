# deps.py - Dependency utilities for FastAPI endpoints
# Exposes settings and the storage-free service knobs the routes need.

from valleyqubit.config import Settings, settings


def get_settings() -> Settings:
    return settings


def get_worker_pool_size() -> int:
    """Thread count for batch reconstruction."""
    return max(1, settings.WORKER_POOL_SIZE)
