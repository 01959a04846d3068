"""
Configuration management for fibnormal
"""

from fibnormal.config.manager import (
    ConfigManager,
    RunConfig,
    DEFAULT_CONFIG,
    OUTPUT_DIR_ENV,
    FORMATS,
)

__all__ = ["ConfigManager", "RunConfig", "DEFAULT_CONFIG", "OUTPUT_DIR_ENV", "FORMATS"]
