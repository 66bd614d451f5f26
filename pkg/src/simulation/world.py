"""One grasp simulation instance: object, gripper, support platform and controller.

``GraspWorld`` owns every piece of mutable simulation state for a single grasp.
Experiments drive it one fixed time step at a time, optionally with a
prescribed gripper motion, and read back a ``ContactReport`` after each step.
A world can be snapshotted and restored so that several experiments start
from the same converged grasp.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import NDArray

from shared.config.settings import RunConfig
from shared.exceptions import ElementInversionError, LinearSolveError, NewtonConvergenceError
from shared.models import GraspCandidate
from simulation.contact import (
    FINGER_0,
    FINGER_1,
    PLATFORM,
    ContactEvaluation,
    ContactModel,
    ContactSet,
    detect_contacts,
    pad_gap,
)
from simulation.fem import ElasticParams, ElementBasis, SimState
from simulation.gripper import ForceController, ForceFilter, GripperState
from simulation.integrator import CouplingTerms, SolverOptions, step_implicit
from simulation.mesh import TetMesh

logger = logging.getLogger(__name__)

_RETRYABLE = (NewtonConvergenceError, LinearSolveError, ElementInversionError)


@dataclass(frozen=True)
class MotionSample:
    """Prescribed gripper pose and velocity at one instant."""

    position: NDArray[np.float64]
    rotation: NDArray[np.float64]
    linear_velocity: NDArray[np.float64]
    angular_velocity: NDArray[np.float64]


GripperMotion = Callable[[float], MotionSample]
"""Maps absolute simulated time to the gripper pose at that time."""


@dataclass(frozen=True)
class PlatformState:
    """Horizontal support plane moving vertically, stopping at ``floor``."""

    height: float
    velocity: float = 0.0
    floor: float = -np.inf

    def lowered(self, speed: float, travel: float) -> PlatformState:
        return replace(self, velocity=-abs(speed), floor=self.height - travel)

    def advanced(self, dt: float) -> PlatformState:
        height = self.height + self.velocity * dt
        if height <= self.floor:
            return replace(self, height=self.floor, velocity=0.0)
        return replace(self, height=height)

    @property
    def moving(self) -> bool:
        return self.velocity != 0.0


@dataclass(frozen=True)
class ContactReport:
    """Contact summary after one accepted step."""

    time: float
    counts: tuple[int, int] = (0, 0)
    raw_forces: tuple[float, float] = (0.0, 0.0)
    filtered_forces: tuple[float, float] = (0.0, 0.0)
    gross_slip: tuple[bool, bool] = (False, False)
    platform_contacts: int = 0
    separation: float = 0.0
    drive_force: float = 0.0

    @property
    def both_fingers_touching(self) -> bool:
        return self.counts[FINGER_0] > 0 and self.counts[FINGER_1] > 0

    def finger_lost(self, gross_slip_is_loss: bool = True) -> bool:
        """At least one finger has no contact, or (optionally) all its contacts slide."""
        if not self.both_fingers_touching:
            return True
        return gross_slip_is_loss and any(self.gross_slip)


@dataclass
class LossMonitor:
    """Debounced loss-of-contact detector.

    Loss is confirmed once ``debounce_steps`` consecutive reports show a lost
    finger; ``onset`` is the time of the first report of that streak.
    """

    debounce_steps: int
    gross_slip_is_loss: bool = True
    streak: int = 0
    onset: float | None = None

    def update(self, report: ContactReport) -> bool:
        if report.finger_lost(self.gross_slip_is_loss):
            if self.streak == 0:
                self.onset = report.time
            self.streak += 1
        else:
            self.streak = 0
            self.onset = None
        return self.streak >= self.debounce_steps

    def reset(self) -> None:
        self.streak = 0
        self.onset = None


@dataclass(frozen=True, eq=False)
class WorldSnapshot:
    state: SimState
    gripper: GripperState
    platform: PlatformState | None
    filtered: tuple[float, float]
    integral: float
    target_force: float | None
    anchors: dict[int, NDArray[np.float64]] = field(repr=False)
    pads_enabled: bool
    gravity_enabled: bool
    report: ContactReport
    evaluation: ContactEvaluation | None = field(repr=False)


def pads_collide(
    positions: NDArray[np.float64], surface_nodes: NDArray[np.int64], gripper: GripperState, thickness: float
) -> bool:
    """True when any object surface node lies strictly inside a finger pad."""
    for pad in gripper.pads(thickness):
        contacts = detect_contacts(positions, surface_nodes, pad)
        if np.any(contacts.penetration > 0.0):
            return True
    return False


class _GripperCoupling:
    """Contact forces plus the finger-separation DOF for one implicit step."""

    def __init__(
        self,
        contact: ContactModel,
        gripper: GripperState,
        platform: PlatformState | None,
        num_nodes: int,
        finger_mass: float,
        joint_damping: float,
    ) -> None:
        self._contact = contact
        self._gripper = gripper
        self._platform = platform
        self._free = not gripper.frozen
        self._separation_dof = 3 * num_nodes if self._free else None
        # Two symmetric fingers moving +-s/2: effective mass and damping are halved.
        self.extra_masses = np.array([0.5 * finger_mass]) if self._free else np.zeros(0)
        self._damping = np.array([0.5 * joint_damping]) if self._free else np.zeros(0)

    def gripper_at(self, separation: NDArray[np.float64], rate: NDArray[np.float64]) -> GripperState:
        if not self._free:
            return self._gripper
        return replace(self._gripper, separation=max(float(separation[0]), 0.0), separation_rate=float(rate[0]))

    def evaluate(
        self,
        positions: NDArray[np.float64],
        velocities: NDArray[np.float64],
        extra_positions: NDArray[np.float64],
        extra_velocities: NDArray[np.float64],
        dt: float,
    ) -> CouplingTerms:
        gripper = self.gripper_at(extra_positions, extra_velocities)
        platform = self._platform
        evaluation = self._contact.evaluate(
            positions,
            velocities,
            gripper,
            platform.height if platform is not None else None,
            platform.velocity if platform is not None else 0.0,
            dt,
            separation_dof=self._separation_dof,
        )
        extra_forces = (
            np.array([evaluation.separation_force - gripper.drive_force]) if self._free else np.zeros(0)
        )
        return CouplingTerms(
            node_forces=evaluation.node_forces,
            extra_forces=extra_forces,
            rows=evaluation.rows,
            cols=evaluation.cols,
            vals=evaluation.vals,
            extra_damping=self._damping,
            payload=evaluation,
        )


class GraspWorld:
    """Mutable simulation of one deformable object held by a parallel-jaw gripper."""

    def __init__(
        self,
        mesh: TetMesh,
        params: ElasticParams,
        settings: RunConfig,
        gripper: GripperState,
        contact: ContactModel,
        platform: PlatformState | None,
    ) -> None:
        self.mesh = mesh
        self.params = params
        self.basis = ElementBasis.build(mesh, params)
        self.settings = settings
        self.contact = contact
        self.dt = settings.simulation.time_step
        self.max_step_halvings = settings.simulation.max_step_halvings
        self._options = SolverOptions.from_settings(settings.simulation)

        controller = settings.controller
        self.filter = ForceFilter(controller.filter_alpha)
        self.controller = ForceController(
            kp=controller.proportional_gain, ki=controller.integral_gain, max_force=controller.max_force
        )
        self.target_force: float | None = None
        self.gravity_enabled = True

        self.state = SimState.at_rest(mesh)
        self.gripper = gripper
        self.platform = platform
        self.evaluation: ContactEvaluation | None = None
        self.report = ContactReport(time=0.0, separation=gripper.separation)

    @classmethod
    def create(cls, mesh: TetMesh, settings: RunConfig, youngs_modulus: float, grasp: GraspCandidate) -> GraspWorld:
        """World at rest on the platform with the gripper open at the grasp pose."""
        params = ElasticParams(
            youngs_modulus=youngs_modulus, poisson_ratio=settings.body.poisson_ratio, density=mesh.density
        )
        k_n = settings.contact.penalty_scale * youngs_modulus * mesh.characteristic_length()
        contact = ContactModel(
            mesh.surface_nodes,
            mesh.num_nodes,
            mu=settings.body.friction,
            k_n=k_n,
            k_t=settings.contact.tangential_stiffness_ratio * k_n,
            pad_thickness=settings.contact.pad_thickness,
            margin=settings.contact.detection_margin,
        )
        gripper_settings = settings.gripper
        gripper = GripperState.from_pose(
            np.asarray(grasp.position),
            np.asarray(grasp.quaternion),
            grasp.separation,
            pad_width=gripper_settings.pad_width,
            pad_length=gripper_settings.pad_length,
            max_half_travel=gripper_settings.max_half_travel,
        )
        platform = PlatformState(height=float(mesh.nodes[:, 2].min()))
        logger.debug("World for grasp %d: E=%.3g Pa, k_n=%.3g N/m", grasp.id, youngs_modulus, k_n)
        return cls(mesh, params, settings, gripper, contact, platform)

    @property
    def time(self) -> float:
        return self.state.time

    # ------------------------------------------------------------------
    # Scenario controls
    # ------------------------------------------------------------------
    def set_gravity(self, enabled: bool) -> None:
        self.gravity_enabled = enabled

    def set_pads_enabled(self, enabled: bool) -> None:
        self.contact.pads_enabled = enabled

    def set_target_force(self, target: float | None) -> None:
        self.target_force = target

    def lower_platform(self, speed: float, travel: float) -> None:
        if self.platform is not None:
            self.platform = self.platform.lowered(speed, travel)

    def remove_platform(self) -> None:
        self.platform = None

    def freeze_fingers(self) -> None:
        """Lock the finger joints; separation stays constant from here on."""
        self.gripper = replace(self.gripper, frozen=True, separation_rate=0.0)
        self.target_force = None

    def pads_collide(self) -> bool:
        return pads_collide(
            self.state.positions, self.mesh.surface_nodes, self.gripper, self.settings.contact.pad_thickness
        )

    def contact_width(self) -> float | None:
        """Pad separation at which both pads would just touch the object in its current shape.

        ``None`` when either pad covers no part of the object.
        """
        gap_0, gap_1 = (
            pad_gap(self.state.positions, self.mesh.surface_nodes, pad)
            for pad in self.gripper.pads(self.settings.contact.pad_thickness, self.contact.margin)
        )
        if gap_0 is None or gap_1 is None:
            return None
        return self.gripper.separation - gap_0 - gap_1

    def contacts(self) -> dict[int, ContactSet]:
        """Contacts of the last accepted step, detected afresh before the first."""
        if self.evaluation is not None:
            return self.evaluation.sets
        platform_height = self.platform.height if self.platform is not None else None
        return self.contact.detect(self.state.positions, self.gripper, platform_height)

    def finger_contacts(self) -> tuple[ContactSet, ContactSet]:
        sets = self.contacts()
        return tuple(
            sets.get(finger) or ContactSet.empty(finger, self.gripper.finger_normal(finger))
            for finger in (FINGER_0, FINGER_1)
        )

    # ------------------------------------------------------------------
    # Snapshots
    # ------------------------------------------------------------------
    def snapshot(self) -> WorldSnapshot:
        return WorldSnapshot(
            state=self.state,
            gripper=self.gripper,
            platform=self.platform,
            filtered=(self.filter.values[FINGER_0], self.filter.values[FINGER_1]),
            integral=self.controller.integral,
            target_force=self.target_force,
            anchors=self.contact.anchors(),
            pads_enabled=self.contact.pads_enabled,
            gravity_enabled=self.gravity_enabled,
            report=self.report,
            evaluation=self.evaluation,
        )

    def restore(self, snapshot: WorldSnapshot) -> None:
        self.state = snapshot.state
        self.gripper = snapshot.gripper
        self.platform = snapshot.platform
        self.filter.values = list(snapshot.filtered)
        self.controller.integral = snapshot.integral
        self.target_force = snapshot.target_force
        self.contact.restore_anchors(snapshot.anchors)
        self.contact.pads_enabled = snapshot.pads_enabled
        self.gravity_enabled = snapshot.gravity_enabled
        self.report = snapshot.report
        self.evaluation = snapshot.evaluation

    # ------------------------------------------------------------------
    # Stepping
    # ------------------------------------------------------------------
    def step(self, motion: GripperMotion | None = None) -> ContactReport:
        """Advance one time step, retrying with halved substeps on solver failure.

        Raises:
            SimulationError: the step fails even at the smallest substep.
        """
        if not self.gripper.frozen and self.target_force is not None:
            drive = self.controller.update(self.filter.mean, self.target_force, self.dt)
            self.gripper = replace(self.gripper, drive_force=drive)

        saved = self.snapshot()
        for halving in range(self.max_step_halvings + 1):
            substeps = 2**halving
            try:
                for _ in range(substeps):
                    self._substep(self.dt / substeps, motion)
                break
            except _RETRYABLE as exc:
                self.restore(saved)
                if halving == self.max_step_halvings:
                    logger.warning("Step at t=%.4f s failed after %d halvings: %s", self.time, halving, exc.message)
                    raise
                logger.debug(
                    "Step at t=%.4f s failed (%s), retrying with %d substeps", self.time, exc.title, 2 * substeps
                )

        self.report = self._make_report()
        return self.report

    def run(self, duration: float, motion: GripperMotion | None = None) -> ContactReport:
        """Step for ``duration`` seconds of simulated time."""
        steps = int(round(duration / self.dt))
        for _ in range(steps):
            self.step(motion)
        return self.report

    def _substep(self, dt: float, motion: GripperMotion | None) -> None:
        end_time = self.state.time + dt
        gripper = self.gripper
        if motion is not None:
            sample = motion(end_time)
            gripper = gripper.moved(sample.position, sample.rotation, sample.linear_velocity, sample.angular_velocity)
        platform = self.platform.advanced(dt) if self.platform is not None else None

        coupling = _GripperCoupling(
            self.contact,
            gripper,
            platform,
            self.mesh.num_nodes,
            self.settings.gripper.finger_mass,
            self.settings.gripper.joint_damping,
        )
        free = not gripper.frozen
        options = self._options if self.gravity_enabled else self._options.without_gravity()
        result = step_implicit(
            self.state,
            dt,
            None,
            None,
            self.params,
            self.basis,
            self.mesh,
            options,
            coupling=coupling,
            extra_positions=np.array([gripper.separation]) if free else None,
            extra_velocities=np.array([gripper.separation_rate]) if free else None,
        )

        gripper = coupling.gripper_at(result.extra_positions, result.extra_velocities)
        if free:
            separation = min(max(float(result.extra_positions[0]), 0.0), gripper.max_separation)
            rate = gripper.separation_rate if 0.0 < separation < gripper.max_separation else 0.0
            gripper = replace(gripper, separation=separation, separation_rate=rate)

        evaluation = result.terms.payload if result.terms is not None else None
        if isinstance(evaluation, ContactEvaluation):
            self.contact.commit(evaluation, gripper)
            self.evaluation = evaluation
        self.state = result.state
        self.gripper = gripper
        self.platform = platform

    def _make_report(self) -> ContactReport:
        evaluation = self.evaluation
        if evaluation is None:
            return ContactReport(time=self.time, separation=self.gripper.separation)
        raw = (evaluation.normal_total(FINGER_0), evaluation.normal_total(FINGER_1))
        filtered = self.filter.update(raw)
        return ContactReport(
            time=self.time,
            counts=(evaluation.count(FINGER_0), evaluation.count(FINGER_1)),
            raw_forces=raw,
            filtered_forces=(filtered[FINGER_0], filtered[FINGER_1]),
            gross_slip=(evaluation.gross_slip(FINGER_0), evaluation.gross_slip(FINGER_1)),
            platform_contacts=evaluation.count(PLATFORM),
            separation=self.gripper.separation,
            drive_force=self.gripper.drive_force,
        )
