"""Reorientation: pick up at F_slip, freeze the fingers, rotate to each test state under gravity."""

from __future__ import annotations

import logging

import numpy as np

from grasping.experiments.base import ExperimentOutcome, GraspExperiment, ReorientationState
from grasping.experiments.directions import direction_set_16
from grasping.experiments.pickup import lower_platform
from grasping.experiments.session import GraspSession
from grasping.experiments.slip import estimate_F_slip
from grasping.experiments.trajectory import rotate_to, stationary
from grasping.metrics import (
    MetricRecord,
    deformation_controllability,
    deformation_field,
    max_von_mises_over_elements,
)
from shared.constants import REORIENT
from simulation.squeeze import squeeze_to_force

logger = logging.getLogger(__name__)

CONTROL_AXIS_INDEX = -1


class ReorientationExperiment(GraspExperiment):
    """Deformation controllability over 16 axes times the configured angles."""

    name = REORIENT

    def run(self, session: GraspSession) -> ExperimentOutcome:
        world = session.restore()
        settings = session.settings
        experiments = settings.experiments
        mesh = world.mesh
        trajectory = session.new_trajectory(self.name, reference=mesh.nodes)

        F_slip = estimate_F_slip(
            world.finger_contacts(),
            world.gripper,
            mesh.center_of_mass(world.state.positions),
            mesh.total_mass,
            settings.body.friction,
            settings.simulation.gravity,
            session.grasp_force,
        )
        if F_slip > settings.controller.max_force:
            logger.warning(
                "F_slip %.4g N exceeds the drive limit; squeezing at %.4g N", F_slip, settings.controller.max_force
            )
            F_slip = settings.controller.max_force
        squeeze_to_force(world, F_slip, settings.controller, check_collision=False, on_step=trajectory.observe)
        trajectory.event("force_converged", world.time, target=F_slip)

        monitor = self.loss_monitor(session)
        lost = lower_platform(
            world,
            experiments,
            monitor,
            trajectory,
            stop_at_lift_off=True,
            lift_off_steps=settings.contact.loss_debounce_steps,
        )
        if lost:
            return ExperimentOutcome(
                metrics=MetricRecord(grasp_id=session.grasp.id, experiment=self.name),
                trajectory=trajectory,
                status="failed",
                reason=f"lost contact while picking up at F_slip={F_slip:.4g} N",
            )
        world.freeze_fingers()
        world.remove_platform()
        trajectory.event("freeze", world.time, separation=world.gripper.separation)
        lifted = world.snapshot()

        plan: list[tuple[int, np.ndarray, float]] = []
        if experiments.include_control_state:
            plan.append((CONTROL_AXIS_INDEX, np.array([0.0, 0.0, 1.0]), 0.0))
        for axis_index, axis in enumerate(direction_set_16()):
            plan.extend((axis_index, axis, angle) for angle in experiments.reorientation_angles)

        states: list[ReorientationState] = []
        for axis_index, axis, angle in plan:
            world.restore(lifted)
            monitor.reset()
            if angle > 0.0:
                motion, duration = rotate_to(world, axis, angle, experiments.reorientation_speed)
            else:
                motion, duration = stationary(world), 0.0
            steps = int(round((duration + experiments.reorientation_settle) / world.dt))
            failed = False
            for _ in range(steps):
                if monitor.update(world.step(motion)):
                    failed = True
                    break

            label = f"axis{axis_index}_angle{angle:.4f}"
            trajectory.capture(world, label)
            if failed:
                trajectory.event("loss_of_contact", monitor.onset or world.time, state=label)
                states.append(ReorientationState(axis_index, tuple(float(a) for a in axis), angle, None, None, True))
                continue
            field = deformation_field(mesh.nodes, world.state.positions)
            states.append(
                ReorientationState(
                    axis_index,
                    tuple(float(a) for a in axis),
                    angle,
                    field.maximum,
                    max_von_mises_over_elements(world.state),
                    False,
                )
            )

        failed_count = sum(s.failed for s in states)
        controllability = deformation_controllability(s.max_deformation for s in states if not s.failed)
        logger.info(
            "Reorientation of grasp %d: %d states, %d failed, controllability %s m",
            session.grasp.id,
            len(states),
            failed_count,
            f"{controllability:.3e}" if controllability is not None else "n/a",
        )
        return ExperimentOutcome(
            metrics=MetricRecord(
                grasp_id=session.grasp.id, experiment=self.name, deform_controllability=controllability
            ),
            trajectory=trajectory,
            status="ok" if controllability is not None else "failed",
            reason=f"{failed_count} of {len(states)} states lost contact" if failed_count else None,
            reorientation_states=states,
        )
