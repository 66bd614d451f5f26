"""Pickup: lower the support platform under the held object, then hold."""

from __future__ import annotations

import logging

from grasping.experiments.base import ExperimentOutcome, GraspExperiment
from grasping.experiments.session import GraspSession
from grasping.experiments.trajectory import GraspTrajectory
from grasping.metrics import (
    MetricRecord,
    deformation_field,
    max_von_mises_over_elements,
    pickup_success,
    state_strain_energy,
)
from shared.config.settings import ExperimentSettings
from shared.constants import PICKUP
from simulation.world import GraspWorld, LossMonitor

logger = logging.getLogger(__name__)


def lower_platform(
    world: GraspWorld,
    settings: ExperimentSettings,
    monitor: LossMonitor,
    trajectory: GraspTrajectory,
    *,
    stop_at_lift_off: bool = False,
    lift_off_steps: int = 3,
) -> bool:
    """Lower the platform over its full travel; returns True if contact was lost.

    With ``stop_at_lift_off`` the descent ends once the object has left the
    platform for ``lift_off_steps`` consecutive steps.
    """
    world.lower_platform(settings.platform_speed, settings.platform_travel)
    steps = int(round(settings.platform_travel / settings.platform_speed / world.dt))
    airborne = 0
    for _ in range(steps):
        report = world.step()
        trajectory.observe(world)
        if monitor.update(report):
            trajectory.event("loss_of_contact", monitor.onset or report.time, phase="lowering")
            return True
        airborne = airborne + 1 if report.platform_contacts == 0 else 0
        if airborne == lift_off_steps:
            trajectory.event("lift_off", report.time)
            if stop_at_lift_off:
                return False
    return False


class PickupExperiment(GraspExperiment):
    """Incremental gravity loading by lowering the platform, then a hold at the grasp force."""

    name = PICKUP

    def run(self, session: GraspSession) -> ExperimentOutcome:
        world = session.restore()
        settings = session.settings.experiments
        trajectory = session.new_trajectory(self.name)
        monitor = self.loss_monitor(session)

        lost = lower_platform(
            world, settings, monitor, trajectory, lift_off_steps=session.settings.contact.loss_debounce_steps
        )
        if not lost:
            hold_steps = int(round(settings.hold_time / world.dt))
            for _ in range(hold_steps):
                report = world.step()
                trajectory.observe(world)
                if monitor.update(report):
                    trajectory.event("loss_of_contact", monitor.onset or report.time, phase="hold")
                    lost = True
                    break

        success = pickup_success(lost)
        trajectory.capture(world, "final")
        if not success:
            logger.info("Pickup of grasp %d failed at t=%.3f s", session.grasp.id, world.time)
            return ExperimentOutcome(
                metrics=MetricRecord(grasp_id=session.grasp.id, experiment=self.name, pickup_success=False),
                trajectory=trajectory,
                reason="lost contact during pickup",
            )

        state = world.state
        field = deformation_field(session.settled_positions, state.positions)
        metrics = MetricRecord(
            grasp_id=session.grasp.id,
            experiment=self.name,
            pickup_success=True,
            max_stress=max_von_mises_over_elements(state),
            max_deformation=field.maximum,
            strain_energy=state_strain_energy(
                state, world.mesh, world.basis, world.params, session.settings.simulation.strain_energy_half_factor
            ),
        )
        trajectory.event("pickup", world.time, max_deformation=metrics.max_deformation)
        logger.info(
            "Pickup of grasp %d held: max stress %.4g Pa, max deformation %.3e m",
            session.grasp.id,
            metrics.max_stress,
            metrics.max_deformation,
        )
        return ExperimentOutcome(metrics=metrics, trajectory=trajectory)
