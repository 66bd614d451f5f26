"""The four grasp experiments and their registry."""

from grasping.experiments.acceleration import AngularAccelerationExperiment, LinearAccelerationExperiment
from grasping.experiments.base import ExperimentOutcome, GraspExperiment, ReorientationState
from grasping.experiments.pickup import PickupExperiment
from grasping.experiments.reorientation import ReorientationExperiment
from grasping.experiments.session import GraspSession
from shared.constants import ExperimentName

EXPERIMENTS: dict[ExperimentName, type[GraspExperiment]] = {
    PickupExperiment.name: PickupExperiment,
    ReorientationExperiment.name: ReorientationExperiment,
    LinearAccelerationExperiment.name: LinearAccelerationExperiment,
    AngularAccelerationExperiment.name: AngularAccelerationExperiment,
}

__all__ = [
    "EXPERIMENTS",
    "AngularAccelerationExperiment",
    "ExperimentOutcome",
    "GraspExperiment",
    "GraspSession",
    "LinearAccelerationExperiment",
    "PickupExperiment",
    "ReorientationExperiment",
    "ReorientationState",
]
