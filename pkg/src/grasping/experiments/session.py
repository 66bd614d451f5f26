"""Per-grasp setup shared by every experiment: settle, squeeze, features."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from grasping.experiments.trajectory import GraspTrajectory
from grasping.features import FeatureRecord, compute_features
from shared.config.settings import RunConfig
from shared.models import GraspCandidate
from simulation.gripper import target_force
from simulation.mesh import TetMesh
from simulation.squeeze import SqueezeResult, squeeze_to_force
from simulation.world import GraspWorld, WorldSnapshot

logger = logging.getLogger(__name__)

SETUP = "setup"


@dataclass(eq=False)
class GraspSession:
    """A grasp held at its target force, ready to be restored by each experiment.

    Attributes:
        grasp: The candidate being evaluated.
        settings: Run configuration for a single Young's modulus.
        world: The simulation instance experiments mutate.
        squeezed: World snapshot at the converged grasp force.
        squeeze: Squeeze telemetry.
        features: Grasp features at the converged state.
        grasp_force: Force the grasp was squeezed to (F_p or the override).
        settled_positions: Node positions after settling, before contact.
        setup_trajectory: Snapshots and events of settle and squeeze.
    """

    grasp: GraspCandidate
    settings: RunConfig
    world: GraspWorld
    squeezed: WorldSnapshot
    squeeze: SqueezeResult
    features: FeatureRecord
    grasp_force: float
    settled_positions: NDArray[np.float64]
    setup_trajectory: GraspTrajectory

    @property
    def mesh(self) -> TetMesh:
        return self.world.mesh

    def restore(self) -> GraspWorld:
        self.world.restore(self.squeezed)
        return self.world

    def new_trajectory(self, experiment: str, reference: NDArray[np.float64] | None = None) -> GraspTrajectory:
        return GraspTrajectory(
            experiment,
            self.settled_positions if reference is None else reference,
            self.settings.output.snapshot_stride if self.settings.output.export_snapshots else None,
        )

    @classmethod
    def prepare(cls, mesh: TetMesh, settings: RunConfig, youngs_modulus: float, grasp: GraspCandidate) -> GraspSession:
        """Settle the object on the platform, then squeeze to the grasp force.

        Raises:
            GraspPoseError: the pads intersect the settled object.
            SqueezeConvergenceError: the grasp force does not converge.
            SimulationError: the solver fails during settling or squeezing.
        """
        world = GraspWorld.create(mesh, settings, youngs_modulus, grasp)
        stride = settings.output.snapshot_stride if settings.output.export_snapshots else None
        trajectory = GraspTrajectory(SETUP, mesh.nodes, stride)

        world.set_pads_enabled(False)
        settle_steps = int(round(settings.simulation.settle_time / world.dt))
        for _ in range(settle_steps):
            world.step()
            trajectory.observe(world)
        settled = world.state.positions.copy()
        trajectory.event("settled", world.time)

        F_p = target_force(mesh.total_mass, settings.body.friction, settings.simulation.gravity)
        grasp_force = settings.experiments.grasp_force_override or F_p
        squeeze = squeeze_to_force(world, grasp_force, settings.controller, on_step=trajectory.observe)
        trajectory.event(
            "force_converged",
            world.time,
            target=grasp_force,
            separation=squeeze.separation,
            first_contact_separation=squeeze.first_contact_separation,
        )
        trajectory.capture(world, "squeezed")

        features = compute_features(world, squeeze, grasp.id)
        logger.info(
            "Grasp %d squeezed to %.4g N (F_p=%.4g N), squeeze distance %.3e m",
            grasp.id,
            grasp_force,
            F_p,
            squeeze.squeeze_distance,
        )
        return cls(
            grasp=grasp,
            settings=settings,
            world=world,
            squeezed=world.snapshot(),
            squeeze=squeeze,
            features=features,
            grasp_force=grasp_force,
            settled_positions=settled,
            setup_trajectory=trajectory,
        )
