"""Tracing: grasp-aware log records and optional OpenTelemetry spans.

Configure via the run configuration:
    DEFGRASP_TELEMETRY__TRACING_ENABLED=true
    DEFGRASP_TELEMETRY__CONSOLE_EXPORTER=true
"""

from __future__ import annotations

import logging

logger = logging.getLogger(__name__)


_tracing_configured = False


def configure_tracing() -> None:
    """Start the telemetry resource of the DI container."""
    global _tracing_configured
    if _tracing_configured:
        return

    from container import get_app_container

    get_app_container().infrastructure.telemetry.init()

    _tracing_configured = True


def shutdown_tracing() -> None:
    """Shutdown tracing and perform cleanup."""
    global _tracing_configured
    if not _tracing_configured:
        return

    from container import get_app_container

    get_app_container().shutdown_resources()
    _tracing_configured = False
    logger.debug("Tracing telemetry shutdown complete.")
