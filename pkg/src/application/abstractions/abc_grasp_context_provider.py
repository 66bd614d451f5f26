from abc import ABC, abstractmethod
from contextlib import AbstractContextManager


class AbcGraspContextProvider(ABC):
    """Interface for tagging and reading the grasp and experiment currently being simulated."""

    @abstractmethod
    def get_grasp_id(self) -> str:
        """Get the current grasp id, or a placeholder outside a grasp."""

    @abstractmethod
    def get_experiment(self) -> str:
        """Get the current experiment name, or a placeholder outside an experiment."""

    @abstractmethod
    def grasp_scope(self, grasp_id: int) -> AbstractContextManager[None]:
        """Context in which ``get_grasp_id`` returns ``grasp_id``."""

    @abstractmethod
    def experiment_scope(self, experiment: str) -> AbstractContextManager[None]:
        """Context in which ``get_experiment`` returns ``experiment``."""
