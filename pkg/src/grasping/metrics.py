"""Grasp performance metrics computed from simulated states."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from shared.constants import ExperimentName
from shared.utils.geometry import kabsch
from simulation.fem import ElasticParams, ElementBasis, SimState, strain_energy, von_mises
from simulation.mesh import TetMesh

logger = logging.getLogger(__name__)


class MetricRecord(BaseModel):
    """Metrics of one grasp experiment; ``None`` marks a metric not produced by it."""

    model_config = ConfigDict(frozen=True)

    grasp_id: int
    experiment: ExperimentName
    pickup_success: bool | None = None
    max_stress: float | None = Field(default=None, ge=0.0, description="Pa")
    max_deformation: float | None = Field(default=None, ge=0.0, description="m")
    strain_energy: float | None = Field(default=None, ge=0.0, description="J")
    linear_instability: float | None = Field(default=None, ge=0.0, description="m/s^2")
    angular_instability: float | None = Field(default=None, ge=0.0, description="rad/s^2")
    deform_controllability: float | None = Field(default=None, ge=0.0, description="m")
    censored_dirs: int | None = Field(default=None, ge=0)


@dataclass(frozen=True, eq=False)
class DeformationField:
    displacements: NDArray[np.float64]
    degenerate: bool = False

    @property
    def maximum(self) -> float:
        return max_deformation(self.displacements)


def deformation_field(pre: NDArray[np.float64], post: NDArray[np.float64]) -> DeformationField:
    """Nodal displacement with the best-fit rigid motion removed.

    Collinear point sets only have the translation removed and are flagged.
    """
    fit = kabsch(pre, post)
    if fit.degenerate:
        logger.warning("Deformation reference is collinear; removed translation only")
    return DeformationField(displacements=fit.residuals, degenerate=fit.degenerate)


def max_deformation(displacements: NDArray[np.float64]) -> float:
    """Largest nodal displacement norm."""
    if len(displacements) == 0:
        return 0.0
    return float(np.linalg.norm(displacements, axis=1).max())


def max_von_mises_over_elements(state: SimState) -> float:
    """Maximum element von Mises stress of ``state``."""
    if len(state.stresses) == 0:
        return 0.0
    return float(np.max(von_mises(state.stresses)))


def state_strain_energy(
    state: SimState, mesh: TetMesh, basis: ElementBasis, params: ElasticParams, half: bool = True
) -> float:
    return strain_energy(state, mesh, basis, params, half)


def instability(loss_accelerations: Sequence[float], limit: float) -> float:
    """Mean loss-of-contact acceleration; censored entries must already hold ``limit``."""
    if not loss_accelerations:
        return limit
    values = np.minimum(np.asarray(loss_accelerations, dtype=np.float64), limit)
    return float(values.mean())


def deformation_controllability(state_maxima: Iterable[float]) -> float | None:
    """Largest deformation over the reorientation states that kept contact, ``None`` if none did."""
    values = list(state_maxima)
    return max(values) if values else None


def pickup_success(lost_contact: bool) -> bool:
    """A pickup succeeds when contact was never lost during loading and hold."""
    return not lost_contact
