import contextlib
import contextvars
from collections.abc import Iterator

from application.abstractions.abc_grasp_context_provider import AbcGraspContextProvider
from shared.constants import EXPERIMENT_CONTEXT_KEY, GRASP_CONTEXT_KEY, UNKNOWN_EXPERIMENT, UNKNOWN_GRASP_ID

_grasp_id_var: contextvars.ContextVar[str] = contextvars.ContextVar(GRASP_CONTEXT_KEY, default=UNKNOWN_GRASP_ID)
_experiment_var: contextvars.ContextVar[str] = contextvars.ContextVar(
    EXPERIMENT_CONTEXT_KEY, default=UNKNOWN_EXPERIMENT
)


@contextlib.contextmanager
def _scoped(var: contextvars.ContextVar[str], value: str) -> Iterator[None]:
    token = var.set(value)
    try:
        yield
    finally:
        var.reset(token)


class ContextGraspProvider(AbcGraspContextProvider):
    """
    Implementation of AbcGraspContextProvider backed by context variables,
    so log records and spans pick up the grasp being simulated in this process.
    """

    def get_grasp_id(self) -> str:
        return _grasp_id_var.get()

    def get_experiment(self) -> str:
        return _experiment_var.get()

    def grasp_scope(self, grasp_id: int) -> contextlib.AbstractContextManager[None]:
        return _scoped(_grasp_id_var, str(grasp_id))

    def experiment_scope(self, experiment: str) -> contextlib.AbstractContextManager[None]:
        return _scoped(_experiment_var, experiment)
