"""Penalty contact between object surface nodes and rigid planar bodies.

Each rigid body (a finger pad or the support platform) is a rectangle with an
inward normal and a thickness behind its face. A surface node inside that
slab is in contact with penetration ``depth``; the normal force is
``k_n * depth``. Friction is a tangential spring anchored where the contact
stuck, clamped to the Coulomb cone; the anchor offset persists between steps
so that a sustained tangential load is held without creep.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import NDArray

if TYPE_CHECKING:
    from simulation.gripper import GripperState

logger = logging.getLogger(__name__)

FINGER_0 = 0
FINGER_1 = 1
PLATFORM = 2
BODIES = (FINGER_0, FINGER_1, PLATFORM)

_WORLD_UP = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True, eq=False)
class ContactSet:
    """All contacts of the object against one rigid body, one row per touching node.

    Attributes:
        body: FINGER_0, FINGER_1 or PLATFORM.
        normal: Unit normal pointing from the body into the object.
        nodes: Object node indices.
        positions: World positions of the nodes.
        pad_coords: (width, length) coordinates in the body's plane.
        penetration: Depth behind the body face, >= 0.
    """

    body: int
    normal: NDArray[np.float64]
    nodes: NDArray[np.int64]
    positions: NDArray[np.float64]
    pad_coords: NDArray[np.float64]
    penetration: NDArray[np.float64]

    def __len__(self) -> int:
        return len(self.nodes)

    @classmethod
    def empty(cls, body: int, normal: NDArray[np.float64]) -> ContactSet:
        return cls(
            body=body,
            normal=normal,
            nodes=np.zeros(0, dtype=np.int64),
            positions=np.zeros((0, 3)),
            pad_coords=np.zeros((0, 2)),
            penetration=np.zeros(0),
        )


@dataclass(frozen=True)
class PadGeometry:
    """A rigid rectangle with an inward normal and a slab of given thickness behind it."""

    body: int
    center: NDArray[np.float64]
    normal: NDArray[np.float64]
    width_axis: NDArray[np.float64]
    length_axis: NDArray[np.float64]
    half_width: float
    half_length: float
    thickness: float
    margin: float = 0.0

    @classmethod
    def platform(cls, height: float) -> PadGeometry:
        return cls(
            body=PLATFORM,
            center=np.array([0.0, 0.0, height]),
            normal=_WORLD_UP,
            width_axis=np.array([1.0, 0.0, 0.0]),
            length_axis=np.array([0.0, 1.0, 0.0]),
            half_width=np.inf,
            half_length=np.inf,
            thickness=np.inf,
        )


def detect_contacts(
    positions: NDArray[np.float64], surface_nodes: NDArray[np.int64], pad: PadGeometry
) -> ContactSet:
    """Surface nodes inside the pad slab, the rectangle expanded by the pad margin.

    Nodes exactly on the face are reported with zero penetration.
    """
    candidates = np.asarray(surface_nodes, dtype=np.int64)
    rel = positions[candidates] - pad.center
    depth = -(rel @ pad.normal)
    eta = rel @ pad.width_axis
    zeta = rel @ pad.length_axis
    inside = (
        (depth >= 0.0)
        & (depth <= pad.thickness)
        & (np.abs(eta) <= pad.half_width + pad.margin)
        & (np.abs(zeta) <= pad.half_length + pad.margin)
    )
    idx = np.flatnonzero(inside)
    return ContactSet(
        body=pad.body,
        normal=pad.normal,
        nodes=candidates[idx],
        positions=positions[candidates[idx]],
        pad_coords=np.stack([eta[idx], zeta[idx]], axis=1),
        penetration=depth[idx],
    )


def pad_gap(positions: NDArray[np.float64], surface_nodes: NDArray[np.int64], pad: PadGeometry) -> float | None:
    """Signed distance from the pad face to the nearest surface node over the pad rectangle.

    Negative when that node already penetrates; ``None`` when no node lies in
    front of or inside the pad.
    """
    rel = positions[np.asarray(surface_nodes, dtype=np.int64)] - pad.center
    ahead = rel @ pad.normal
    over = (
        (ahead >= -pad.thickness)
        & (np.abs(rel @ pad.width_axis) <= pad.half_width + pad.margin)
        & (np.abs(rel @ pad.length_axis) <= pad.half_length + pad.margin)
    )
    if not over.any():
        return None
    return float(ahead[over].min())


@dataclass(frozen=True, eq=False)
class ContactForces:
    """Forces on the object nodes of one ContactSet.

    Attributes:
        normal: (K, 3) normal forces.
        tangential: (K, 3) friction forces.
        offsets: (K, 3) stick-anchor offsets after this evaluation.
        slipping: (K,) True where friction sits on the cone boundary.
        trial: (K, 3) trial tangential displacement.
    """

    normal: NDArray[np.float64]
    tangential: NDArray[np.float64]
    offsets: NDArray[np.float64]
    slipping: NDArray[np.bool_]
    trial: NDArray[np.float64] = field(repr=False)

    @property
    def total(self) -> NDArray[np.float64]:
        return self.normal + self.tangential

    @property
    def normal_magnitude(self) -> NDArray[np.float64]:
        return np.linalg.norm(self.normal, axis=1)


def friction_forces(
    normal_magnitude: NDArray[np.float64], trial: NDArray[np.float64], mu: float, k_t: float
) -> tuple[NDArray[np.float64], NDArray[np.bool_]]:
    """Stick if the spring force k_t*|trial| fits in the cone mu*f_n, else slip on its boundary."""
    trial_force = -k_t * trial
    magnitude = np.linalg.norm(trial_force, axis=1)
    cone = mu * normal_magnitude
    slipping = magnitude > cone
    scale = np.ones_like(magnitude)
    np.divide(cone, magnitude, out=scale, where=slipping)
    return trial_force * scale[:, None], slipping


def contact_forces(
    contacts: ContactSet,
    relative_velocity: NDArray[np.float64],
    offsets: NDArray[np.float64],
    mu: float,
    k_n: float,
    k_t: float,
    dt: float,
) -> ContactForces:
    """Penalty normal force and Coulomb friction for every contact of ``contacts``.

    The trial tangential displacement is the previous anchor offset projected
    onto the contact plane plus the tangential relative velocity times dt,
    so friction opposes the tangential relative motion.
    """
    n = contacts.normal
    projector = np.eye(3) - np.outer(n, n)
    f_n = k_n * contacts.penetration
    trial = offsets @ projector + (relative_velocity @ projector) * dt
    tangential, slipping = friction_forces(f_n, trial, mu, k_t)
    return ContactForces(
        normal=f_n[:, None] * n,
        tangential=tangential,
        offsets=-tangential / k_t,
        slipping=slipping,
        trial=trial,
    )


@dataclass(frozen=True, eq=False)
class ContactEvaluation:
    """Contact forces and stiffness at one Newton iterate.

    Stiffness triplets are in position units over the generalised DOF vector
    (3 per node, then the finger-separation DOF when it is free).
    """

    node_forces: NDArray[np.float64]
    separation_force: float
    rows: NDArray[np.int64]
    cols: NDArray[np.int64]
    vals: NDArray[np.float64]
    sets: dict[int, ContactSet]
    forces: dict[int, ContactForces]

    def normal_total(self, body: int) -> float:
        f = self.forces.get(body)
        return float(f.normal_magnitude.sum()) if f is not None else 0.0

    def count(self, body: int) -> int:
        s = self.sets.get(body)
        return len(s) if s is not None else 0

    def gross_slip(self, body: int) -> bool:
        """True when every loaded contact on ``body`` is slipping."""
        f = self.forces.get(body)
        if f is None or len(f.slipping) == 0:
            return False
        loaded = f.normal_magnitude > 0.0
        return bool(loaded.any() and f.slipping[loaded].all())


class ContactModel:
    """Stateful penalty contact: detection, forces, stiffness and stick anchors.

    Anchors of the finger pads are stored in the gripper frame so they rotate
    with the gripper; platform anchors are stored in the world frame.
    """

    def __init__(
        self,
        surface_nodes: NDArray[np.int64],
        num_nodes: int,
        *,
        mu: float,
        k_n: float,
        k_t: float,
        pad_thickness: float,
        margin: float,
    ) -> None:
        self.surface_nodes = np.asarray(surface_nodes, dtype=np.int64)
        self.num_nodes = num_nodes
        self.mu = mu
        self.k_n = k_n
        self.k_t = k_t
        self.pad_thickness = pad_thickness
        self.margin = margin
        self.pads_enabled = True
        self._anchors = {body: np.zeros((num_nodes, 3)) for body in BODIES}

    def anchors(self) -> dict[int, NDArray[np.float64]]:
        return {body: a.copy() for body, a in self._anchors.items()}

    def restore_anchors(self, anchors: dict[int, NDArray[np.float64]]) -> None:
        self._anchors = {body: a.copy() for body, a in anchors.items()}

    def geometries(self, gripper: GripperState, platform_height: float | None) -> list[PadGeometry]:
        bodies: list[PadGeometry] = []
        if self.pads_enabled:
            bodies.extend(gripper.pads(self.pad_thickness, self.margin))
        if platform_height is not None:
            bodies.append(PadGeometry.platform(platform_height))
        return bodies

    def detect(
        self, positions: NDArray[np.float64], gripper: GripperState, platform_height: float | None
    ) -> dict[int, ContactSet]:
        return {
            g.body: detect_contacts(positions, self.surface_nodes, g) for g in self.geometries(gripper, platform_height)
        }

    def evaluate(
        self,
        positions: NDArray[np.float64],
        velocities: NDArray[np.float64],
        gripper: GripperState,
        platform_height: float | None,
        platform_velocity: float,
        dt: float,
        separation_dof: int | None = None,
    ) -> ContactEvaluation:
        """Forces and stiffness for the configuration at the end of the step."""
        node_forces = np.zeros((self.num_nodes, 3))
        separation_force = 0.0
        rows: list[NDArray[np.int64]] = []
        cols: list[NDArray[np.int64]] = []
        vals: list[NDArray[np.float64]] = []
        sets: dict[int, ContactSet] = {}
        forces: dict[int, ContactForces] = {}

        for geometry in self.geometries(gripper, platform_height):
            contacts = detect_contacts(positions, self.surface_nodes, geometry)
            sets[geometry.body] = contacts
            if not len(contacts):
                forces[geometry.body] = ContactForces(
                    normal=np.zeros((0, 3)),
                    tangential=np.zeros((0, 3)),
                    offsets=np.zeros((0, 3)),
                    slipping=np.zeros(0, dtype=bool),
                    trial=np.zeros((0, 3)),
                )
                continue

            nodes = contacts.nodes
            if geometry.body == PLATFORM:
                body_velocity = np.broadcast_to(np.array([0.0, 0.0, platform_velocity]), (len(nodes), 3))
                prev = self._anchors[PLATFORM][nodes]
            else:
                body_velocity = gripper.point_velocity(positions[nodes])
                prev = self._anchors[geometry.body][nodes] @ gripper.rotation.T

            result = contact_forces(
                contacts, velocities[nodes] - body_velocity, prev, self.mu, self.k_n, self.k_t, dt
            )
            forces[geometry.body] = result
            np.add.at(node_forces, nodes, result.total)

            blocks = self._node_blocks(contacts.normal, result)
            dofs = 3 * nodes[:, None] + np.arange(3)
            rows.append(np.repeat(dofs, 3, axis=1).ravel())
            cols.append(np.tile(dofs, (1, 3)).ravel())
            vals.append(blocks.ravel())

            if separation_dof is not None and geometry.body != PLATFORM:
                n = contacts.normal
                separation_force += 0.5 * float(result.normal_magnitude.sum())
                coupling = np.broadcast_to(0.5 * self.k_n * n, (len(nodes), 3)).ravel()
                sep = np.full(coupling.shape, separation_dof, dtype=np.int64)
                rows.extend([dofs.ravel(), sep])
                cols.extend([sep, dofs.ravel()])
                vals.extend([coupling, coupling])
                rows.append(np.array([separation_dof]))
                cols.append(np.array([separation_dof]))
                vals.append(np.array([0.25 * self.k_n * len(nodes)]))

        return ContactEvaluation(
            node_forces=node_forces,
            separation_force=separation_force,
            rows=np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64),
            cols=np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64),
            vals=np.concatenate(vals) if vals else np.zeros(0),
            sets=sets,
            forces=forces,
        )

    def _node_blocks(self, normal: NDArray[np.float64], result: ContactForces) -> NDArray[np.float64]:
        """Per-contact 3x3 stiffness: k_n n n^T plus the friction tangent."""
        k = len(result.slipping)
        projector = np.eye(3) - np.outer(normal, normal)
        blocks = np.broadcast_to(self.k_n * np.outer(normal, normal) + self.k_t * projector, (k, 3, 3)).copy()
        if result.slipping.any():
            idx = np.flatnonzero(result.slipping)
            trial = result.trial[idx]
            length = np.linalg.norm(trial, axis=1)
            direction = trial / length[:, None]
            cone = self.mu * result.normal_magnitude[idx]
            tangent = (cone / length)[:, None, None] * (projector - np.einsum("ki,kj->kij", direction, direction))
            blocks[idx] = self.k_n * np.outer(normal, normal) + tangent
        return blocks

    def commit(self, evaluation: ContactEvaluation, gripper: GripperState) -> None:
        """Store the stick anchors of the accepted step; non-contacting nodes are reset."""
        for body in BODIES:
            anchors = np.zeros((self.num_nodes, 3))
            contacts = evaluation.sets.get(body)
            if contacts is not None and len(contacts):
                offsets = evaluation.forces[body].offsets
                anchors[contacts.nodes] = offsets if body == PLATFORM else offsets @ gripper.rotation
            self._anchors[body] = anchors
