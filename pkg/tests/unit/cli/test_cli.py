"""Tests for the command line and its exit codes."""

from collections.abc import Callable
from pathlib import Path
from unittest.mock import MagicMock

import meshio
import numpy as np
import pytest
from typer.testing import CliRunner

from application.services import evaluation_service
from cli import app
from grasping.experiments import ExperimentOutcome
from grasping.experiments.trajectory import GraspTrajectory, TrajectorySnapshot
from grasping.features import FeatureRecord
from grasping.metrics import MetricRecord
from infrastructure.io.grasp_file import read_grasps, write_grasps
from infrastructure.io.snapshots import save_snapshot
from shared.constants import EXIT_CONFIGURATION_ERROR, EXIT_MESH_ERROR, EXIT_OUTPUT_ERROR, EXIT_SIMULATION_ERROR
from shared.exceptions import SqueezeConvergenceError
from shared.models import GraspCandidate
from simulation.mesh import TetMesh

runner = CliRunner()


def snapshot_of(mesh: TetMesh, label: str) -> TrajectorySnapshot:
    return TrajectorySnapshot(
        time=0.5,
        label=label,
        positions=mesh.nodes,
        von_mises=np.ones(mesh.num_elements),
        deformation=np.zeros_like(mesh.nodes),
        separation=0.04,
        gripper_position=np.zeros(3),
        gripper_quaternion=np.array([0.0, 0.0, 0.0, 1.0]),
    )


class SnapshotPickup:
    """Pickup stand-in that records one snapshot and one event."""

    name = "pickup"

    def __call__(self, session: MagicMock) -> ExperimentOutcome:
        trajectory = GraspTrajectory(self.name, session.mesh.nodes, stride=0.1)
        trajectory.snapshots.append(snapshot_of(session.mesh, "final"))
        trajectory.event("lifted", 0.5, height=0.02)
        return ExperimentOutcome(
            metrics=MetricRecord(grasp_id=session.grasp.id, experiment=self.name, pickup_success=True),
            trajectory=trajectory,
        )


class TestRunCommand:
    """Test cases for ``defgrasp run``."""

    def test_missing_config_file(self, tmp_path: Path) -> None:
        result = runner.invoke(app, ["run", "--config", str(tmp_path / "missing.json")])

        assert result.exit_code == EXIT_CONFIGURATION_ERROR
        assert "configuration-error" in result.output

    def test_invalid_config_value(self, write_config: Callable[..., Path]) -> None:
        result = runner.invoke(app, ["run", "--config", str(write_config({"Object": {"Friction": -1.0}}))])

        assert result.exit_code == EXIT_CONFIGURATION_ERROR

    def test_malformed_mesh(self, tmp_path: Path, write_config: Callable[..., Path]) -> None:
        mesh = tmp_path / "broken.tet"
        mesh.write_text("tet 4\n", encoding="utf-8")
        config = write_config({"Object": {"MeshPath": str(mesh)}, "Output": {"Directory": str(tmp_path / "out")}})

        result = runner.invoke(app, ["run", "--config", str(config)])

        assert result.exit_code == EXIT_MESH_ERROR
        assert "mesh-parse-error" in result.output

    def test_no_grasp_reaches_its_force(
        self, tet_file: Path, tmp_path: Path, write_config: Callable[..., Path], monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.setattr(
            evaluation_service.GraspSession, "prepare", MagicMock(side_effect=SqueezeConvergenceError("timeout"))
        )
        grasps = write_grasps(
            tmp_path / "grasps.csv",
            [GraspCandidate(id=0, position=(0.0, 0.0, 0.0), quaternion=(0.0, 0.0, 0.0, 1.0), separation=0.05)],
        )
        config = write_config(
            {
                "Object": {"MeshPath": str(tet_file)},
                "GraspSource": {"File": str(grasps)},
                "Experiments": {"Enabled": ["pickup"]},
                "Output": {"Directory": str(tmp_path / "out")},
            }
        )

        result = runner.invoke(app, ["run", "--config", str(config)])

        assert result.exit_code == EXIT_SIMULATION_ERROR
        assert (tmp_path / "out" / "manifest.json").is_file()
        assert (tmp_path / "out" / "metrics.csv").is_file()

    def test_default_run_writes_vtk_snapshots(
        self, tet_file: Path, tmp_path: Path, write_config: Callable[..., Path], monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """Snapshots are on by default; the real writers produce readable legacy VTK files."""

        def prepare(mesh, settings, youngs_modulus, candidate):
            features = FeatureRecord(
                grasp_id=candidate.id,
                pure_dist=0.0,
                perp_dist=0.0,
                num_contacts=1.0,
                edge_dist=0.02,
                squeeze_dist=0.001,
                gripper_sep=0.04,
                grav_align=1.5,
                contact_area=1e-4,
            )
            return MagicMock(
                grasp=candidate,
                mesh=mesh,
                features=features,
                setup_trajectory=GraspTrajectory("setup", mesh.nodes, stride=None),
            )

        monkeypatch.setattr(evaluation_service.GraspSession, "prepare", MagicMock(side_effect=prepare))
        monkeypatch.setattr(evaluation_service, "EXPERIMENTS", {"pickup": SnapshotPickup})
        grasps = write_grasps(
            tmp_path / "grasps.csv",
            [GraspCandidate(id=0, position=(0.0, 0.0, 0.0), quaternion=(0.0, 0.0, 0.0, 1.0), separation=0.05)],
        )
        config = write_config(
            {
                "Object": {"MeshPath": str(tet_file)},
                "GraspSource": {"File": str(grasps)},
                "Experiments": {"Enabled": ["pickup"]},
                "Output": {"Directory": str(tmp_path / "out")},
            }
        )

        result = runner.invoke(app, ["run", "--config", str(config)])

        assert result.exit_code == 0, result.output
        snapshots = tmp_path / "out" / "snapshots" / "grasp_0"
        vtk = snapshots / "pickup_0000.vtk"
        assert vtk.read_text(encoding="utf-8").startswith("# vtk DataFile Version 4.2\n")
        np.testing.assert_allclose(meshio.read(vtk).cell_data["von_mises"][0], 1.0)
        assert (snapshots / "pickup_0000.npz").is_file()
        assert (snapshots / "pickup_events.json").is_file()
        assert (snapshots / "setup_events.json").is_file()


class TestSampleCommand:
    """Test cases for ``defgrasp sample``."""

    def test_writes_grasp_file(self, tet_file: Path, tmp_path: Path, write_config: Callable[..., Path]) -> None:
        config = write_config({"Object": {"MeshPath": str(tet_file)}, "GraspSource": {"Sampler": {"Count": 2}}})
        out = tmp_path / "grasps.csv"

        result = runner.invoke(app, ["sample", "--config", str(config), "--out", str(out)])

        assert result.exit_code == 0
        grasps = read_grasps(out)
        assert len(grasps) <= 2
        assert f"wrote {len(grasps)} grasps" in result.output

    def test_zero_count_writes_header_only(
        self, tet_file: Path, tmp_path: Path, write_config: Callable[..., Path]
    ) -> None:
        config = write_config({"Object": {"MeshPath": str(tet_file)}, "GraspSource": {"Sampler": {"Count": 0}}})
        out = tmp_path / "grasps.csv"

        result = runner.invoke(app, ["sample", "--config", str(config), "--out", str(out)])

        assert result.exit_code == 0
        assert read_grasps(out) == []

    def test_sampling_needs_a_sampler(
        self, tet_file: Path, tmp_path: Path, write_config: Callable[..., Path]
    ) -> None:
        grasps = tmp_path / "given.csv"
        grasps.write_text("id\n", encoding="utf-8")
        config = write_config({"Object": {"MeshPath": str(tet_file)}, "GraspSource": {"File": str(grasps)}})

        result = runner.invoke(app, ["sample", "--config", str(config), "--out", str(tmp_path / "out.csv")])

        assert result.exit_code == EXIT_CONFIGURATION_ERROR


class TestExportVtkCommand:
    """Test cases for ``defgrasp export-vtk``."""

    def test_renders_snapshot(self, small_box: TetMesh, tmp_path: Path) -> None:
        state = save_snapshot(tmp_path / "state.npz", snapshot_of(small_box, "final"), small_box.tets)
        out = tmp_path / "state.vtk"

        result = runner.invoke(app, ["export-vtk", "--state", str(state), "--out", str(out)])

        assert result.exit_code == 0
        assert "final" in result.output
        np.testing.assert_allclose(meshio.read(out).cell_data["von_mises"][0], 1.0)

    def test_missing_snapshot(self, tmp_path: Path) -> None:
        result = runner.invoke(
            app, ["export-vtk", "--state", str(tmp_path / "missing.npz"), "--out", str(tmp_path / "x.vtk")]
        )

        assert result.exit_code == EXIT_OUTPUT_ERROR
