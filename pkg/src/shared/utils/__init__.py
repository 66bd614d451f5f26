"""Shared utilities and helpers."""

from .geometry import KabschResult, kabsch, point_line_distance, rotation_about, unit

__all__ = ["KabschResult", "kabsch", "point_line_distance", "rotation_about", "unit"]
