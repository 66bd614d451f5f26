import logging

from application.abstractions.abc_grasp_context_provider import AbcGraspContextProvider
from shared.constants import EXPERIMENT_CONTEXT_KEY, GRASP_CONTEXT_KEY


class GraspLogFilter(logging.Filter):
    """
    Custom logging.Filter that injects the grasp id and experiment name
    into every standard python log record.
    """

    def __init__(self, grasp_provider: AbcGraspContextProvider):
        super().__init__()
        self._grasp_provider = grasp_provider

    def filter(self, record: logging.LogRecord) -> bool:
        setattr(record, GRASP_CONTEXT_KEY, self._grasp_provider.get_grasp_id())
        setattr(record, EXPERIMENT_CONTEXT_KEY, self._grasp_provider.get_experiment())
        return True
