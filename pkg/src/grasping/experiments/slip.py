"""Grasp force needed to resist rotational slip under the gravitational moment."""

from __future__ import annotations

import logging

import numpy as np
from numpy.typing import NDArray

from shared.constants import FORCE_SAFETY_FACTOR
from shared.utils.geometry import point_line_distance
from simulation.contact import ContactSet
from simulation.gripper import GripperState

logger = logging.getLogger(__name__)


def patch_extent(contacts: ContactSet, gripper: GripperState) -> float:
    """Extent of a contact patch along its principal in-plane direction."""
    if len(contacts) < 2:
        return 0.0
    plane = np.column_stack([gripper.width_axis, gripper.approach_axis])
    coords = contacts.positions @ plane
    centered = coords - coords.mean(axis=0)
    _, vectors = np.linalg.eigh(centered.T @ centered)
    projection = centered @ vectors[:, -1]
    return float(np.ptp(projection))


def estimate_F_slip(
    contacts: tuple[ContactSet, ContactSet],
    gripper: GripperState,
    com: NDArray[np.float64],
    mass: float,
    mu: float,
    gravity: float,
    F_p: float,
) -> float:
    """Two point contacts per finger, ``h`` apart, opposing the gravitational moment.

    The torque capacity of both fingers is ``mu * F * h / 2``; it must cover
    the worst-case moment ``m * g * d`` with the safety factor applied, where
    ``d`` is the distance from the COM to the line through the patch centers.
    """
    centers = [c.positions.mean(axis=0) for c in contacts if len(c)]
    if len(centers) < 2:
        logger.warning("Missing contact patch; using F_p for F_slip")
        return F_p
    axis = centers[1] - centers[0]
    if np.linalg.norm(axis) <= 1e-12:
        axis = gripper.squeeze_axis
    d = point_line_distance(com, centers[0], axis)
    h = float(np.mean([patch_extent(c, gripper) for c in contacts]))
    if h <= 0.0:
        logger.warning("Contact patch has zero extent; using F_p for F_slip")
        return F_p
    required = FORCE_SAFETY_FACTOR * mass * gravity * d / (mu * h / 2.0)
    return max(F_p, required)
