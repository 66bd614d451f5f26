"""Configuration module."""

from .settings import RunConfig, get_settings, load_run_config

__all__ = ["RunConfig", "get_settings", "load_run_config"]
