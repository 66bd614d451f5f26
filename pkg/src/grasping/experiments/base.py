"""Common experiment interface and outcome."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Literal

from grasping.experiments.session import GraspSession
from grasping.experiments.trajectory import GraspTrajectory
from grasping.metrics import MetricRecord
from shared.constants import ExperimentName
from simulation.world import LossMonitor

ExperimentStatus = Literal["ok", "failed"]


@dataclass(frozen=True)
class ReorientationState:
    axis_index: int
    axis: tuple[float, float, float]
    angle: float
    max_deformation: float | None
    max_stress: float | None
    failed: bool


@dataclass(eq=False)
class ExperimentOutcome:
    """Result of one experiment on one grasp."""

    metrics: MetricRecord
    trajectory: GraspTrajectory
    status: ExperimentStatus = "ok"
    reason: str | None = None
    censored: int = 0
    reorientation_states: list[ReorientationState] = field(default_factory=list)


class GraspExperiment(ABC):
    """One experiment protocol, run from the session's converged squeeze state."""

    name: ExperimentName

    @abstractmethod
    def run(self, session: GraspSession) -> ExperimentOutcome:
        """Run the protocol and return its metrics; must start with ``session.restore()``."""

    def __call__(self, session: GraspSession) -> ExperimentOutcome:
        return self.run(session)

    @staticmethod
    def loss_monitor(session: GraspSession) -> LossMonitor:
        contact = session.settings.contact
        return LossMonitor(contact.loss_debounce_steps, contact.gross_slip_is_loss)
