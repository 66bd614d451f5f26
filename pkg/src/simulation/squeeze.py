"""Squeeze-to-force: close the fingers under force control until the grasp force settles."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

from shared.config.settings import ControllerSettings
from shared.exceptions import GraspPoseError, SqueezeConvergenceError
from simulation.world import ContactReport, GraspWorld

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SqueezeResult:
    """Telemetry of a converged squeeze.

    Attributes:
        target: Force the controller regulated to (N).
        first_contact_separation: Separation at which both pads touch the object
            as shaped in the last step before contact (m).
        separation: Separation at convergence (m).
        filtered_forces: Per-finger filtered normal force at convergence (N).
        duration: Simulated squeeze time (s).
        steps: Number of time steps taken.
    """

    target: float
    first_contact_separation: float
    separation: float
    filtered_forces: tuple[float, float]
    duration: float
    steps: int

    @property
    def squeeze_distance(self) -> float:
        return max(self.first_contact_separation - self.separation, 0.0)


def within_band(report: ContactReport, target: float, band: float) -> bool:
    """Both filtered finger forces within +-band of the target."""
    return all(abs(f - target) <= band * target for f in report.filtered_forces)


def squeeze_to_force(
    world: GraspWorld,
    target: float,
    settings: ControllerSettings,
    *,
    check_collision: bool = True,
    on_step: Callable[[GraspWorld], None] | None = None,
) -> SqueezeResult:
    """Close the fingers until both filtered forces stay within the band for the window.

    Raises:
        GraspPoseError: the pads intersect the object before squeezing.
        SqueezeConvergenceError: the fingers close on nothing or the force does
            not settle within the time budget.
    """
    if check_collision and world.pads_collide():
        raise GraspPoseError("finger pads intersect the object at the initial separation")

    world.set_pads_enabled(True)
    world.set_target_force(target)
    start = world.time
    window_steps = max(1, int(round(settings.convergence_window / world.dt)))
    budget_steps = int(round(settings.time_budget / world.dt))

    first_contact: float | None = None
    touch_width = world.contact_width()
    in_band = 0
    for step in range(1, budget_steps + 1):
        report = world.step()
        if on_step is not None:
            on_step(world)

        if first_contact is None:
            if report.both_fingers_touching:
                first_contact = touch_width if touch_width is not None else report.separation
                logger.debug("First contact at t=%.4f s, separation %.5f m", report.time, first_contact)
            else:
                touch_width = world.contact_width()
        if first_contact is None and report.separation <= 0.0:
            raise SqueezeConvergenceError("fingers closed without contact")

        touching_in_band = first_contact is not None and within_band(report, target, settings.convergence_band)
        in_band = in_band + 1 if touching_in_band else 0
        if in_band >= window_steps:
            logger.info(
                "Squeeze converged to %.4g N in %.3f s (separation %.5f m)",
                target,
                report.time - start,
                report.separation,
            )
            return SqueezeResult(
                target=target,
                first_contact_separation=first_contact if first_contact is not None else report.separation,
                separation=report.separation,
                filtered_forces=report.filtered_forces,
                duration=report.time - start,
                steps=step,
            )

    raise SqueezeConvergenceError(
        f"grasp force did not reach {target:.4g} N +-{settings.convergence_band:.0%} within {settings.time_budget:g} s"
    )
