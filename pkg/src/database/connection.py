"""
Cache file management for computed ideal class sets
"""
import logging
import os
import tempfile
from contextlib import contextmanager

from utils.config import CACHE_DIR

logger = logging.getLogger(__name__)


def cache_dir(override: str = None) -> str:
    """Resolve (and create) the cache directory"""
    path = override or os.getenv("COHEN_CACHE_DIR", CACHE_DIR)
    os.makedirs(path, exist_ok=True)
    return path


def cache_path(key: str, suffix: str = "json", directory: str = None) -> str:
    return os.path.join(cache_dir(directory), f"{key}.{suffix}")


@contextmanager
def open_cache(path: str, mode: str = "r"):
    """
    Context manager for cache files; writes go through a temporary file that
    replaces the target only when the block finishes without error.

    Usage:
        with open_cache(path, "w") as f:
            json.dump(data, f)
    """
    if "r" in mode:
        with open(path, mode, encoding="utf-8") as f:
            yield f
        return

    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, mode, encoding="utf-8", newline="\n") as f:
            yield f
        os.replace(tmp, path)
    except Exception as e:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise e


def remove_cache(path: str) -> bool:
    if os.path.exists(path):
        os.remove(path)
        logger.info(f"Removed cache file {path}")
        return True
    return False
