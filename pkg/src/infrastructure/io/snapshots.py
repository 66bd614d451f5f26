"""Field snapshots stored as ``.npz`` archives next to their VTK renderings."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from grasping.experiments.trajectory import GraspTrajectory, TrajectorySnapshot
from infrastructure.io.atomic import atomic_path, write_text_atomic
from infrastructure.io.vtk_writer import write_vtk
from shared.exceptions import OutputError
from simulation.mesh import TetMesh

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StoredSnapshot:
    """A snapshot read back from disk, enough to re-render it."""

    positions: NDArray[np.float64]
    tets: NDArray[np.int64]
    von_mises: NDArray[np.float64]
    deformation: NDArray[np.float64]
    time: float
    label: str


def save_snapshot(path: Path, snapshot: TrajectorySnapshot, tets: NDArray[np.int64]) -> Path:
    with atomic_path(path, suffix=".npz") as temp, temp.open("wb") as handle:
        np.savez_compressed(
            handle,
            positions=snapshot.positions,
            tets=tets,
            von_mises=snapshot.von_mises,
            deformation=snapshot.deformation,
            time=np.float64(snapshot.time),
            label=np.str_(snapshot.label),
            separation=np.float64(snapshot.separation),
            gripper_position=snapshot.gripper_position,
            gripper_quaternion=snapshot.gripper_quaternion,
        )
    return path


def load_snapshot(path: Path | str) -> StoredSnapshot:
    """Read a ``.npz`` snapshot written by :func:`save_snapshot`.

    Raises:
        OutputError: the file is missing or lacks a required array.
    """
    path = Path(path)
    try:
        with np.load(path, allow_pickle=False) as data:
            return StoredSnapshot(
                positions=data["positions"],
                tets=data["tets"].astype(np.int64),
                von_mises=data["von_mises"],
                deformation=data["deformation"],
                time=float(data["time"]),
                label=str(data["label"]),
            )
    except (OSError, KeyError, ValueError) as exc:
        raise OutputError(f"cannot read snapshot {path}: {exc}") from exc


def write_trajectory(directory: Path, mesh: TetMesh, trajectory: GraspTrajectory) -> list[Path]:
    """Write every snapshot as ``{experiment}_{index:04d}.vtk`` plus ``.npz`` and the event log as JSON."""
    written: list[Path] = []
    for index, snapshot in enumerate(trajectory.snapshots):
        stem = directory / f"{trajectory.experiment}_{index:04d}"
        vtk = stem.with_suffix(".vtk")
        written.append(write_vtk(vtk, snapshot.positions, mesh.tets, snapshot.von_mises, snapshot.deformation))
        written.append(save_snapshot(stem.with_suffix(".npz"), snapshot, mesh.tets))

    events = [{"time": event.time, "kind": event.kind, "detail": event.detail} for event in trajectory.events]
    try:
        payload = json.dumps(events, indent=2, default=_json_default)
    except TypeError as exc:
        raise OutputError(f"cannot serialize {trajectory.experiment} events: {exc}") from exc
    written.append(write_text_atomic(directory / f"{trajectory.experiment}_events.json", payload + "\n"))
    logger.debug("Wrote %d snapshots of %s to %s", len(trajectory.snapshots), trajectory.experiment, directory)
    return written


def _json_default(value: object) -> object:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")
