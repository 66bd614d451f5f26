from infrastructure.tracing.processors.log import GraspLogFilter
from infrastructure.tracing.processors.span import GraspSpanProcessor

__all__ = [
    "GraspLogFilter",
    "GraspSpanProcessor",
]
