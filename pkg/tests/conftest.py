"""Pytest fixtures and configuration."""

import json
import os
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

from simulation.mesh import TetMesh
from simulation.primitives import box_mesh, unit_cube_five_tets


@pytest.fixture(autouse=True)
def mock_env_vars(monkeypatch: pytest.MonkeyPatch) -> None:
    """Isolate settings from the developer environment.

    This fixture ensures tests don't depend on the .env file or on
    DEFGRASP_* variables exported in the shell.
    """
    from shared.config.settings import RunConfig, get_settings

    monkeypatch.setitem(RunConfig.model_config, "env_file", None)

    for key in list(os.environ):
        if key.startswith("DEFGRASP_"):
            monkeypatch.delenv(key)

    # Clear cached settings
    get_settings.cache_clear()


@pytest.fixture
def unit_cube() -> TetMesh:
    """Unit cube split into five tetrahedra, density 1000."""
    return unit_cube_five_tets()


@pytest.fixture
def small_box() -> TetMesh:
    """4 cm cube of 2x2x2 cells centered at the origin; mass 0.064 kg."""
    return box_mesh(divisions=(2, 2, 2), size=(0.04, 0.04, 0.04), density=1000.0)


@pytest.fixture
def tet_file(tmp_path: Path) -> Path:
    """A 4 cm cube mesh written in the plain .tet format."""
    mesh = box_mesh(divisions=(1, 1, 1), size=(0.04, 0.04, 0.04))
    lines = [f"tet {mesh.num_nodes} {mesh.num_elements}"]
    lines += [" ".join(repr(float(c)) for c in node) for node in mesh.nodes]
    lines += [" ".join(str(int(i)) for i in tet) for tet in mesh.tets]
    path = tmp_path / "cube.tet"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[dict[str, Any]], Path]:
    """Write a ``{"DefGrasp": ...}`` run configuration and return its path."""

    def _write(section: dict[str, Any], name: str = "run.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps({"DefGrasp": section}), encoding="utf-8")
        return path

    return _write
