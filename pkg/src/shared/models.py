"""Shared models used across the simulator."""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.spatial.transform import Rotation

from shared.constants import GRASP_COLUMNS, MAX_GRIPPER_OPENING

_QUATERNION_NORM_TOL = 1e-6


class GraspCandidate(BaseModel):
    """A 6-DOF gripper pose plus the initial finger separation for one grasp.

    The orientation is a unit quaternion in (x, y, z, w) order whose rotation
    matrix has the squeeze axis, pad width axis and approach axis as columns.
    """

    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    position: tuple[float, float, float] = Field(description="Finger midpoint in metres")
    quaternion: tuple[float, float, float, float] = Field(description="Unit quaternion (x, y, z, w)")
    separation: float = Field(gt=0.0, le=MAX_GRIPPER_OPENING + 1e-12, description="Initial pad separation (m)")

    @field_validator("position")
    @classmethod
    def _finite_position(cls, value: tuple[float, float, float]) -> tuple[float, float, float]:
        if not all(math.isfinite(v) for v in value):
            raise ValueError("position must be finite")
        return value

    @field_validator("quaternion")
    @classmethod
    def _unit_quaternion(cls, value: tuple[float, float, float, float]) -> tuple[float, float, float, float]:
        norm = math.sqrt(sum(v * v for v in value))
        if not math.isfinite(norm) or abs(norm - 1.0) > _QUATERNION_NORM_TOL:
            raise ValueError(f"quaternion must have unit norm, got {norm:.6g}")
        return tuple(v / norm for v in value)  # type: ignore[return-value]

    @classmethod
    def from_frame(
        cls, grasp_id: int, position: NDArray[np.float64], rotation: NDArray[np.float64], separation: float
    ) -> GraspCandidate:
        quat = Rotation.from_matrix(rotation).as_quat()
        return cls(
            id=grasp_id,
            position=tuple(float(v) for v in position),
            quaternion=tuple(float(v) for v in quat),
            separation=float(separation),
        )

    @property
    def rotation(self) -> NDArray[np.float64]:
        return Rotation.from_quat(self.quaternion).as_matrix()

    @property
    def squeeze_axis(self) -> NDArray[np.float64]:
        return self.rotation[:, 0]

    @property
    def approach_axis(self) -> NDArray[np.float64]:
        return self.rotation[:, 2]

    def to_row(self) -> dict[str, float | int]:
        values = (self.id, *self.position, *self.quaternion, self.separation)
        return dict(zip(GRASP_COLUMNS, values, strict=True))
