"""Unit-test fixtures: short, coarse run configurations so simulations stay fast."""

from collections.abc import Callable
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from shared.config.settings import RunConfig, load_run_config
from simulation.fem import ElasticParams, ElementBasis, SimState, elastic_response
from simulation.mesh import TetMesh


@pytest.fixture
def quick_settings(tet_file: Path, tmp_path: Path) -> RunConfig:
    """A soft 4 cm cube with short settle, hold and ramp times."""
    return load_run_config(
        Object={"MeshPath": str(tet_file), "YoungsModulus": 2.0e5, "Friction": 0.7},
        Simulation={"TimeStep": 0.002, "SettleTime": 0.02},
        Controller={"TimeBudget": 3.0, "ConvergenceWindow": 0.05},
        Experiments={
            "HoldTime": 0.1,
            "PlatformTravel": 0.02,
            "ReorientationAngles": [1.5707963267948966],
            "ReorientationSettle": 0.05,
            "DirectionIndices": [0, 1],
        },
        GraspSource={"Sampler": {"Count": 2, "Seed": 7}},
        Output={"Directory": str(tmp_path / "results"), "ExportSnapshots": False},
    )


@pytest.fixture
def stressed_state() -> Callable[[np.ndarray, TetMesh, ElementBasis, ElasticParams], SimState]:
    """Build a motionless state at ``positions`` with matching rotations and stresses."""

    def _build(positions: np.ndarray, mesh: TetMesh, basis: ElementBasis, params: ElasticParams) -> SimState:
        response = elastic_response(positions, mesh, basis, params)
        return replace(
            SimState.at_rest(mesh), positions=positions, rotations=response.rotations, stresses=response.stresses
        )

    return _build
