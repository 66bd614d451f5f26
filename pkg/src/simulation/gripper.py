"""Parallel-jaw gripper: pose, pads, force filtering and the grasp-force controller.

The gripper frame has the squeeze axis (finger 0 towards finger 1) as its
first column, the pad width direction second and the approach direction
third. Fingers sit symmetrically at -s/2 and +s/2 along the squeeze axis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.transform import Rotation

from shared.constants import FORCE_SAFETY_FACTOR, STANDARD_GRAVITY
from shared.exceptions import ConfigurationError
from simulation.contact import FINGER_0, FINGER_1, PadGeometry

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GripperState:
    """Rigid gripper with two symmetric prismatic fingers.

    Attributes:
        position: Midpoint between the two pads (world, m).
        rotation: (3, 3) gripper frame, columns = squeeze, width, approach axes.
        separation: Distance between the pad faces (m).
        pad_width: Pad extent along the width axis (m).
        pad_length: Pad extent along the approach axis (m).
        max_half_travel: Largest finger offset from the midpoint (m).
        drive_force: Closing force commanded on each finger (N).
        separation_rate: ds/dt of the finger DOF (m/s).
        linear_velocity: Velocity of the gripper frame origin (m/s).
        angular_velocity: Angular velocity of the gripper frame (rad/s, world).
        frozen: Fingers locked, separation no longer a degree of freedom.
    """

    position: NDArray[np.float64]
    rotation: NDArray[np.float64]
    separation: float
    pad_width: float = 0.02
    pad_length: float = 0.04
    max_half_travel: float = 0.04
    drive_force: float = 0.0
    separation_rate: float = 0.0
    linear_velocity: NDArray[np.float64] = field(default_factory=lambda: np.zeros(3))
    angular_velocity: NDArray[np.float64] = field(default_factory=lambda: np.zeros(3))
    frozen: bool = False

    def __post_init__(self) -> None:
        if self.separation < 0.0:
            raise ValueError(f"finger separation must be non-negative, got {self.separation}")

    @classmethod
    def from_pose(
        cls,
        position: NDArray[np.float64],
        quaternion: NDArray[np.float64],
        separation: float,
        *,
        pad_width: float = 0.02,
        pad_length: float = 0.04,
        max_half_travel: float = 0.04,
    ) -> GripperState:
        """Build from a midpoint and a unit quaternion in (x, y, z, w) order."""
        return cls(
            position=np.asarray(position, dtype=np.float64).copy(),
            rotation=Rotation.from_quat(quaternion).as_matrix(),
            separation=min(float(separation), 2.0 * max_half_travel),
            pad_width=pad_width,
            pad_length=pad_length,
            max_half_travel=max_half_travel,
        )

    @property
    def quaternion(self) -> NDArray[np.float64]:
        return Rotation.from_matrix(self.rotation).as_quat()

    @property
    def squeeze_axis(self) -> NDArray[np.float64]:
        return self.rotation[:, 0]

    @property
    def width_axis(self) -> NDArray[np.float64]:
        return self.rotation[:, 1]

    @property
    def approach_axis(self) -> NDArray[np.float64]:
        return self.rotation[:, 2]

    @property
    def max_separation(self) -> float:
        return 2.0 * self.max_half_travel

    def finger_normal(self, finger: int) -> NDArray[np.float64]:
        """Inward pad normal: +squeeze for finger 0, -squeeze for finger 1."""
        return self.squeeze_axis if finger == FINGER_0 else -self.squeeze_axis

    def pad_center(self, finger: int) -> NDArray[np.float64]:
        offset = -0.5 * self.separation if finger == FINGER_0 else 0.5 * self.separation
        return self.position + offset * self.squeeze_axis

    def pads(self, thickness: float, margin: float = 0.0) -> tuple[PadGeometry, PadGeometry]:
        return tuple(
            PadGeometry(
                body=finger,
                center=self.pad_center(finger),
                normal=self.finger_normal(finger),
                width_axis=self.width_axis,
                length_axis=self.approach_axis,
                half_width=0.5 * self.pad_width,
                half_length=0.5 * self.pad_length,
                thickness=thickness,
                margin=margin,
            )
            for finger in (FINGER_0, FINGER_1)
        )

    def point_velocity(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        """Rigid-body velocity of gripper-attached points (finger motion excluded)."""
        return self.linear_velocity + np.cross(self.angular_velocity, points - self.position)

    def moved(
        self,
        position: NDArray[np.float64],
        rotation: NDArray[np.float64],
        linear_velocity: NDArray[np.float64],
        angular_velocity: NDArray[np.float64],
    ) -> GripperState:
        return replace(
            self,
            position=np.asarray(position, dtype=np.float64),
            rotation=np.asarray(rotation, dtype=np.float64),
            linear_velocity=np.asarray(linear_velocity, dtype=np.float64),
            angular_velocity=np.asarray(angular_velocity, dtype=np.float64),
        )


def target_force(mass: float, mu: float, gravity: float = STANDARD_GRAVITY) -> float:
    """Minimum grasp force for pickup, 1.3 * m * g / mu."""
    if mu <= 0.0:
        raise ConfigurationError(f"friction coefficient must be positive, got {mu}")
    if mass < 0.0:
        raise ConfigurationError(f"object mass must not be negative, got {mass}")
    return FORCE_SAFETY_FACTOR * mass * gravity / mu


def lowpass_update(prev: float, raw: float, alpha: float) -> float:
    """Exponential low-pass: prev + alpha * (raw - prev)."""
    return prev + alpha * (raw - prev)


@dataclass
class ForceFilter:
    """Per-finger low-pass filtered normal force."""

    alpha: float
    values: list[float] = field(default_factory=lambda: [0.0, 0.0])

    def update(self, raw: tuple[float, float] | list[float]) -> list[float]:
        self.values = [lowpass_update(prev, r, self.alpha) for prev, r in zip(self.values, raw, strict=True)]
        return self.values

    @property
    def mean(self) -> float:
        return 0.5 * (self.values[FINGER_0] + self.values[FINGER_1])


def force_controller(
    filtered: float,
    target: float,
    integral: float,
    *,
    kp: float,
    ki: float,
    max_force: float,
    dt: float,
) -> tuple[float, float]:
    """One PI update on the force error; returns (drive force, new integral term).

    The output is clamped to [0, max_force] and the integral only accumulates
    while the output is not saturated in the direction of the error.
    """
    error = target - filtered
    candidate = integral + ki * error * dt
    drive = kp * error + candidate
    if drive > max_force:
        drive = max_force
        if error > 0.0:
            candidate = integral
    elif drive < 0.0:
        drive = 0.0
        if error < 0.0:
            candidate = integral
    return drive, candidate


@dataclass
class ForceController:
    """Stateful PI grasp-force controller, identical command on both fingers."""

    kp: float
    ki: float
    max_force: float
    integral: float = 0.0

    def update(self, filtered: float, target: float, dt: float) -> float:
        drive, self.integral = force_controller(
            filtered, target, self.integral, kp=self.kp, ki=self.ki, max_force=self.max_force, dt=dt
        )
        return drive

