"""File-backed dataset writer for one run directory."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from pathlib import Path

from application.abstractions.abc_dataset_writer import AbcDatasetWriter
from application.domain.run_manifest import RunManifest
from grasping.experiments import ReorientationState
from grasping.experiments.trajectory import GraspTrajectory
from grasping.features import FeatureRecord
from grasping.metrics import MetricRecord
from infrastructure.io.atomic import write_text_atomic
from infrastructure.io.snapshots import write_trajectory
from infrastructure.io.tables import write_table
from shared.constants import (
    FEATURE_COLUMNS,
    FEATURES_FILE,
    MANIFEST_FILE,
    METRIC_COLUMNS,
    METRICS_FILE,
    REORIENTATION_COLUMNS,
    REORIENTATION_FILE,
    SNAPSHOT_DIR,
)
from simulation.mesh import TetMesh

logger = logging.getLogger(__name__)


def reorientation_row(grasp_id: int, state: ReorientationState) -> dict[str, object]:
    ax, ay, az = state.axis
    return {
        "grasp_id": grasp_id,
        "axis_index": state.axis_index,
        "ax": ax,
        "ay": ay,
        "az": az,
        "angle": state.angle,
        "max_deformation": state.max_deformation,
        "max_stress": state.max_stress,
        "failed": state.failed,
    }


class DatasetWriter(AbcDatasetWriter):
    """Writes CSV tables, the manifest and snapshots under ``directory``."""

    def __init__(self, directory: Path | str) -> None:
        self.directory = Path(directory)

    def snapshot_directory(self, grasp_id: int) -> Path:
        return self.directory / SNAPSHOT_DIR / f"grasp_{grasp_id}"

    def write_features(self, records: Sequence[FeatureRecord]) -> Path:
        path = write_table(self.directory / FEATURES_FILE, (r.model_dump() for r in records), FEATURE_COLUMNS)
        logger.info("Wrote %d feature rows to %s", len(records), path)
        return path

    def write_metrics(self, records: Sequence[MetricRecord]) -> Path:
        path = write_table(self.directory / METRICS_FILE, (r.model_dump() for r in records), METRIC_COLUMNS)
        logger.info("Wrote %d metric rows to %s", len(records), path)
        return path

    def write_reorientation(self, rows: Sequence[tuple[int, ReorientationState]]) -> Path:
        return write_table(
            self.directory / REORIENTATION_FILE,
            (reorientation_row(grasp_id, state) for grasp_id, state in rows),
            REORIENTATION_COLUMNS,
        )

    def write_manifest(self, manifest: RunManifest) -> Path:
        return write_text_atomic(self.directory / MANIFEST_FILE, manifest.model_dump_json(indent=2) + "\n")

    def write_trajectory(self, grasp_id: int, mesh: TetMesh, trajectory: GraspTrajectory) -> list[Path]:
        return write_trajectory(self.snapshot_directory(grasp_id), mesh, trajectory)
