"""Shared utilities, helpers, and cross-cutting concerns."""
