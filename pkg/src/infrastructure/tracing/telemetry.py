import logging
from collections.abc import Iterator

from opentelemetry import trace
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import ConsoleSpanExporter, SimpleSpanProcessor

from application.abstractions.abc_grasp_context_provider import AbcGraspContextProvider
from infrastructure.grasp_context import ContextGraspProvider
from infrastructure.tracing.processors import GraspLogFilter, GraspSpanProcessor
from shared.config.settings import RunConfig

logger = logging.getLogger(__name__)


LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [grasp %(grasp_id)s / %(experiment)s] %(message)s"


def install_log_filter(grasp_provider: AbcGraspContextProvider) -> GraspLogFilter:
    """Attach the grasp filter to every root handler so propagated records carry the grasp id."""
    grasp_filter = GraspLogFilter(grasp_provider)
    root_logger = logging.getLogger()
    for handler in root_logger.handlers:
        if not any(isinstance(f, GraspLogFilter) for f in handler.filters):
            handler.addFilter(grasp_filter)
    if not root_logger.handlers:
        logger.warning("No root log handler found. Grasp log enrichment will not be applied.")
    return grasp_filter


def configure_logging(level: str = "INFO") -> None:
    """Configure the root logger once per process with grasp-aware records."""
    log_level = getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(level=log_level, format=LOG_FORMAT)
    logging.getLogger().setLevel(log_level)
    install_log_filter(ContextGraspProvider())


def setup_telemetry(grasp_provider: AbcGraspContextProvider, settings: RunConfig) -> Iterator[TracerProvider | None]:
    """
    Configures an OpenTelemetry tracer provider with the grasp span processor.
    Yields None when tracing is disabled; the provider is shut down on resource release.
    """
    if not settings.telemetry.tracing_enabled:
        logger.debug("Tracing disabled; spans are no-ops.")
        yield None
        return

    resource = Resource.create(
        {
            "service.name": settings.application.name,
            "service.version": settings.application.version,
        }
    )
    provider = TracerProvider(resource=resource)
    provider.add_span_processor(GraspSpanProcessor(grasp_provider))
    if settings.telemetry.console_exporter:
        provider.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter()))
    trace.set_tracer_provider(provider)
    logger.info(
        "OpenTelemetry tracing initialized for %s (%s).", settings.application.name, settings.application.version
    )
    try:
        yield provider
    finally:
        provider.shutdown()
