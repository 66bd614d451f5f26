"""Pre-pickup grasp features, measured once the grasp force has converged."""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field

from shared.exceptions import SimulationError
from shared.utils.geometry import point_line_distance
from simulation.contact import ContactSet
from simulation.squeeze import SqueezeResult
from simulation.world import GraspWorld

logger = logging.getLogger(__name__)

_VERTICAL = np.array([0.0, 0.0, 1.0])


class FeatureRecord(BaseModel):
    """The seven grasp features plus the supplementary contact area."""

    model_config = ConfigDict(frozen=True)

    grasp_id: int
    pure_dist: float = Field(ge=0.0, description="Patch center to COM, averaged over fingers (m)")
    perp_dist: float = Field(ge=0.0, description="COM to the finger-normal line through the patch center (m)")
    num_contacts: float = Field(ge=0.0, description="Contact nodes per finger, averaged")
    edge_dist: float = Field(ge=0.0, description="Distal pad edge to patch center, averaged (m)")
    squeeze_dist: float = Field(ge=0.0, description="Separation change since first contact (m)")
    gripper_sep: float = Field(ge=0.0, description="Separation at the converged grasp force (m)")
    grav_align: float = Field(ge=0.0, le=math.pi, description="Finger-0 normal vs world vertical (rad)")
    contact_area: float = Field(ge=0.0, description="Surface area of contacting nodes, averaged (m^2)")


def contact_patch_center(contacts: ContactSet) -> NDArray[np.float64]:
    """Unweighted mean of the contact positions of one finger.

    Raises:
        SimulationError: the finger has no contacts.
    """
    if len(contacts) == 0:
        raise SimulationError(f"finger {contacts.body} has no contacts; features are undefined")
    return contacts.positions.mean(axis=0)


def compute_features(
    world: GraspWorld, squeeze: SqueezeResult, grasp_id: int, com: NDArray[np.float64] | None = None
) -> FeatureRecord:
    """Features of the current (converged) grasp state.

    ``com`` defaults to the centre of mass of the current node positions
    weighted by the rest-mesh lumped masses.
    """
    gripper = world.gripper
    com = world.mesh.center_of_mass(world.state.positions) if com is None else np.asarray(com)
    node_areas = world.mesh.node_surface_areas()
    half_length = 0.5 * gripper.pad_length

    pure, perp, counts, edges, areas = [], [], [], [], []
    for contacts in world.finger_contacts():
        center = contact_patch_center(contacts)
        normal = gripper.finger_normal(contacts.body)
        pure.append(float(np.linalg.norm(center - com)))
        perp.append(point_line_distance(com, center, normal))
        counts.append(len(contacts))
        along = float((center - gripper.pad_center(contacts.body)) @ gripper.approach_axis)
        edges.append(max(half_length - along, 0.0))
        areas.append(float(node_areas[contacts.nodes].sum()))

    cosine = float(np.clip(gripper.finger_normal(0) @ _VERTICAL, -1.0, 1.0))
    record = FeatureRecord(
        grasp_id=grasp_id,
        pure_dist=float(np.mean(pure)),
        perp_dist=float(np.mean(perp)),
        num_contacts=float(np.mean(counts)),
        edge_dist=float(np.mean(edges)),
        squeeze_dist=squeeze.squeeze_distance,
        gripper_sep=squeeze.separation,
        grav_align=math.acos(cosine),
        contact_area=float(np.mean(areas)),
    )
    logger.debug("Features for grasp %d: %s", grasp_id, record.model_dump())
    return record
