from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence
from pathlib import Path

from application.domain.run_manifest import RunManifest
from grasping.experiments import ReorientationState
from grasping.experiments.trajectory import GraspTrajectory
from grasping.features import FeatureRecord
from grasping.metrics import MetricRecord
from simulation.mesh import TetMesh


class AbcDatasetWriter(ABC):
    """Interface for persisting one run directory.

    Implementations must write every file atomically.
    """

    directory: Path

    @abstractmethod
    def write_features(self, records: Sequence[FeatureRecord]) -> Path: ...

    @abstractmethod
    def write_metrics(self, records: Sequence[MetricRecord]) -> Path: ...

    @abstractmethod
    def write_reorientation(self, rows: Sequence[tuple[int, ReorientationState]]) -> Path: ...

    @abstractmethod
    def write_manifest(self, manifest: RunManifest) -> Path: ...

    @abstractmethod
    def write_trajectory(self, grasp_id: int, mesh: TetMesh, trajectory: GraspTrajectory) -> list[Path]:
        """Write snapshots and events of one trajectory; returns the files written."""
