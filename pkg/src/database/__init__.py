# Cache module initialization
from .connection import cache_dir, cache_path, open_cache, remove_cache

__all__ = ['cache_dir', 'cache_path', 'open_cache', 'remove_cache']
