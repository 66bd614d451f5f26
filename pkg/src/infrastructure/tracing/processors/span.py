from opentelemetry import trace
from opentelemetry.sdk.trace import SpanProcessor

from application.abstractions.abc_grasp_context_provider import AbcGraspContextProvider


class GraspSpanProcessor(SpanProcessor):
    """
    Custom SpanProcessor that stamps grasp.id and experiment.name
    on every span when it starts.
    """

    def __init__(self, grasp_provider: AbcGraspContextProvider):
        self._grasp_provider = grasp_provider

    def on_start(self, span: trace.Span, parent_context=None):
        span.set_attribute("grasp.id", self._grasp_provider.get_grasp_id())
        span.set_attribute("experiment.name", self._grasp_provider.get_experiment())
