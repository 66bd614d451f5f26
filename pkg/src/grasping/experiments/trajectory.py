"""Trajectory recording and prescribed gripper motions."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray

from shared.utils.geometry import kabsch, rotation_about, unit
from simulation.fem import von_mises
from simulation.world import GraspWorld, GripperMotion, MotionSample

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrajectoryEvent:
    time: float
    kind: str
    detail: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class TrajectorySnapshot:
    """Fields of one recorded instant.

    ``deformation`` has the best rigid fit to the trajectory reference removed.
    """

    time: float
    label: str
    positions: NDArray[np.float64]
    von_mises: NDArray[np.float64]
    deformation: NDArray[np.float64]
    separation: float
    gripper_position: NDArray[np.float64]
    gripper_quaternion: NDArray[np.float64]


class GraspTrajectory:
    """Snapshots at a fixed stride of simulated time plus an event log."""

    def __init__(self, experiment: str, reference: NDArray[np.float64], stride: float | None) -> None:
        self.experiment = experiment
        self.reference = reference
        self.stride = stride
        self.snapshots: list[TrajectorySnapshot] = []
        self.events: list[TrajectoryEvent] = []
        self._next_time: float | None = None

    def event(self, kind: str, time: float, **detail: Any) -> None:
        self.events.append(TrajectoryEvent(time=time, kind=kind, detail=detail))
        logger.debug("%s: %s at t=%.4f s %s", self.experiment, kind, time, detail or "")

    def observe(self, world: GraspWorld) -> None:
        """Record a snapshot whenever another stride of simulated time has elapsed."""
        if self.stride is None:
            return
        if self._next_time is None:
            self._next_time = world.time
        if world.time + 1e-12 >= self._next_time:
            self.capture(world, f"t={world.time:.3f}")
            self._next_time += self.stride

    def capture(self, world: GraspWorld, label: str) -> None:
        if self.stride is None:
            return
        state = world.state
        self.snapshots.append(
            TrajectorySnapshot(
                time=world.time,
                label=label,
                positions=state.positions.copy(),
                von_mises=np.asarray(von_mises(state.stresses)),
                deformation=kabsch(self.reference, state.positions).residuals,
                separation=world.gripper.separation,
                gripper_position=world.gripper.position.copy(),
                gripper_quaternion=world.gripper.quaternion,
            )
        )


def stationary(world: GraspWorld) -> GripperMotion:
    """Hold the gripper at its current pose."""
    sample = MotionSample(world.gripper.position.copy(), world.gripper.rotation.copy(), np.zeros(3), np.zeros(3))
    return lambda t: sample


def linear_jerk_ramp(world: GraspWorld, direction: NDArray[np.float64], jerk: float) -> GripperMotion:
    """Translate along ``direction`` with acceleration ``jerk * tau``."""
    start = world.time
    p0 = world.gripper.position.copy()
    r0 = world.gripper.rotation.copy()
    d = unit(direction)

    def motion(t: float) -> MotionSample:
        tau = t - start
        return MotionSample(p0 + d * jerk * tau**3 / 6.0, r0, d * jerk * tau**2 / 2.0, np.zeros(3))

    return motion


def angular_jerk_ramp(world: GraspWorld, axis: NDArray[np.float64], jerk: float) -> GripperMotion:
    """Rotate about ``axis`` through the finger midpoint with angular acceleration ``jerk * tau``."""
    start = world.time
    p0 = world.gripper.position.copy()
    r0 = world.gripper.rotation.copy()
    a = unit(axis)

    def motion(t: float) -> MotionSample:
        tau = t - start
        rotation = rotation_about(a, jerk * tau**3 / 6.0) @ r0
        return MotionSample(p0, rotation, np.zeros(3), a * jerk * tau**2 / 2.0)

    return motion


def rotate_to(world: GraspWorld, axis: NDArray[np.float64], angle: float, speed: float) -> tuple[GripperMotion, float]:
    """Rotate by ``angle`` about ``axis`` at constant ``speed``, then hold; returns the motion and its duration."""
    start = world.time
    p0 = world.gripper.position.copy()
    r0 = world.gripper.rotation.copy()
    a = unit(axis)
    duration = angle / speed

    def motion(t: float) -> MotionSample:
        tau = min(t - start, duration)
        omega = a * speed if t - start < duration else np.zeros(3)
        return MotionSample(p0, rotation_about(a, speed * tau) @ r0, np.zeros(3), omega)

    return motion, duration
