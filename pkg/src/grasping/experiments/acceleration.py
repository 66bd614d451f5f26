"""Linear and angular acceleration: ramp the gripper until the object loses contact."""

from __future__ import annotations

import logging
from abc import abstractmethod

import numpy as np
from numpy.typing import NDArray

from grasping.experiments.base import ExperimentOutcome, GraspExperiment
from grasping.experiments.directions import select_directions
from grasping.experiments.session import GraspSession
from grasping.experiments.trajectory import angular_jerk_ramp, linear_jerk_ramp
from grasping.metrics import MetricRecord, instability
from shared.constants import ANGULAR_ACCELERATION, LINEAR_ACCELERATION
from simulation.world import GraspWorld, GripperMotion

logger = logging.getLogger(__name__)


class AccelerationExperiment(GraspExperiment):
    """Gravity-free jerk ramp along each selected direction with frozen fingers.

    The recorded value per direction is the acceleration at the first step of
    the debounced loss of contact, or the limit when contact survives the ramp.
    """

    @abstractmethod
    def limits(self, session: GraspSession) -> tuple[float, float]:
        """(jerk, acceleration limit)."""

    @abstractmethod
    def motion(self, world: GraspWorld, direction: NDArray[np.float64], jerk: float) -> GripperMotion: ...

    @abstractmethod
    def record(self, session: GraspSession, value: float, censored: int) -> MetricRecord: ...

    def run(self, session: GraspSession) -> ExperimentOutcome:
        world = session.restore()
        world.freeze_fingers()
        world.set_gravity(False)
        world.remove_platform()
        base = world.snapshot()

        jerk, limit = self.limits(session)
        steps = int(np.ceil(limit / jerk / world.dt))
        trajectory = session.new_trajectory(self.name)
        monitor = self.loss_monitor(session)

        losses: list[float] = []
        censored = 0
        for index, direction in select_directions(session.settings.experiments.direction_indices):
            world.restore(base)
            monitor.reset()
            start = world.time
            motion = self.motion(world, direction, jerk)
            loss: float | None = None
            for _ in range(steps):
                if monitor.update(world.step(motion)):
                    loss = min(jerk * ((monitor.onset or world.time) - start), limit)
                    break
            trajectory.capture(world, f"direction{index}")
            if loss is None:
                censored += 1
                losses.append(limit)
                trajectory.event("censored", world.time, direction=index)
            else:
                losses.append(loss)
                trajectory.event("loss_of_contact", monitor.onset or world.time, direction=index, acceleration=loss)
            logger.debug("%s direction %d: %s", self.name, index, "censored" if loss is None else f"{loss:.4g}")

        value = instability(losses, limit)
        logger.info(
            "%s for grasp %d: mean loss acceleration %.4g (%d of %d censored)",
            self.name,
            session.grasp.id,
            value,
            censored,
            len(losses),
        )
        return ExperimentOutcome(
            metrics=self.record(session, value, censored), trajectory=trajectory, censored=censored
        )


class LinearAccelerationExperiment(AccelerationExperiment):
    name = LINEAR_ACCELERATION

    def limits(self, session: GraspSession) -> tuple[float, float]:
        experiments = session.settings.experiments
        return experiments.linear_jerk, experiments.linear_limit

    def motion(self, world: GraspWorld, direction: NDArray[np.float64], jerk: float) -> GripperMotion:
        return linear_jerk_ramp(world, direction, jerk)

    def record(self, session: GraspSession, value: float, censored: int) -> MetricRecord:
        return MetricRecord(
            grasp_id=session.grasp.id, experiment=self.name, linear_instability=value, censored_dirs=censored
        )


class AngularAccelerationExperiment(AccelerationExperiment):
    name = ANGULAR_ACCELERATION

    def limits(self, session: GraspSession) -> tuple[float, float]:
        experiments = session.settings.experiments
        return experiments.angular_jerk, experiments.angular_limit

    def motion(self, world: GraspWorld, direction: NDArray[np.float64], jerk: float) -> GripperMotion:
        return angular_jerk_ramp(world, direction, jerk)

    def record(self, session: GraspSession, value: float, censored: int) -> MetricRecord:
        return MetricRecord(
            grasp_id=session.grasp.id, experiment=self.name, angular_instability=value, censored_dirs=censored
        )
