"""Command line interface."""

from cli.app import app

__all__ = ["app"]
