"""Tetrahedral mesh readers: Gmsh ASCII v2.2 and the plain ``.tet`` format."""

from __future__ import annotations

import logging
from pathlib import Path

import meshio
import numpy as np

from application.abstractions.abc_mesh_loader import AbcMeshLoader
from shared.exceptions import MeshParseError
from simulation.mesh import TetMesh

logger = logging.getLogger(__name__)

TET_HEADER = "tet"


def read_tet_file(path: Path) -> tuple[np.ndarray, np.ndarray]:
    """Parse ``tet <n_nodes> <n_tets>`` followed by node coordinates and 0-based element rows."""
    try:
        tokens = path.read_text(encoding="utf-8").split()
    except (OSError, UnicodeDecodeError) as exc:
        raise MeshParseError(f"cannot read {path}: {exc}") from exc
    if len(tokens) < 3 or tokens[0] != TET_HEADER:
        raise MeshParseError(f"{path}: expected header 'tet <n_nodes> <n_tets>'")
    try:
        n_nodes, n_tets = int(tokens[1]), int(tokens[2])
    except ValueError as exc:
        raise MeshParseError(f"{path}: node and element counts must be integers") from exc

    expected = 3 + 3 * n_nodes + 4 * n_tets
    if n_nodes < 0 or n_tets < 0 or len(tokens) != expected:
        raise MeshParseError(f"{path}: header announces {expected - 3} values, file holds {len(tokens) - 3}")
    body = tokens[3:]
    try:
        nodes = np.array(body[: 3 * n_nodes], dtype=np.float64).reshape(n_nodes, 3)
        tets = np.array([int(v) for v in body[3 * n_nodes :]], dtype=np.int64).reshape(n_tets, 4)
    except ValueError as exc:
        raise MeshParseError(f"{path}: {exc}") from exc
    return nodes, tets


def read_gmsh_file(path: Path) -> tuple[np.ndarray, np.ndarray]:
    """Read nodes and type-4 elements from a Gmsh file; other element types are ignored."""
    try:
        data = meshio.read(path, file_format="gmsh")
    except (meshio.ReadError, OSError, ValueError, IndexError, KeyError) as exc:
        raise MeshParseError(f"cannot parse Gmsh file {path}: {exc}") from exc

    tets = data.cells_dict.get("tetra")
    if tets is None or len(tets) == 0:
        raise MeshParseError(f"{path} contains no tetrahedra (element type 4)")
    ignored = sorted(kind for kind in data.cells_dict if kind != "tetra")
    if ignored:
        logger.debug("Ignoring %s cells in %s", ", ".join(ignored), path)
    return np.asarray(data.points, dtype=np.float64), np.asarray(tets, dtype=np.int64)


def load_mesh(path: Path | str, density: float) -> TetMesh:
    """Load and validate a mesh; the format follows the file suffix (``.msh`` or ``.tet``).

    Raises:
        MeshParseError: unreadable or malformed file.
        MeshValidationError: the mesh parses but cannot be simulated.
    """
    path = Path(path)
    if not path.is_file():
        raise MeshParseError(f"mesh file not found: {path}")

    suffix = path.suffix.lower()
    if suffix == ".msh":
        nodes, tets = read_gmsh_file(path)
    elif suffix == ".tet":
        nodes, tets = read_tet_file(path)
    else:
        raise MeshParseError(f"unsupported mesh format '{suffix}' (expected .msh or .tet)")

    mesh = TetMesh.from_arrays(nodes, tets, density)
    logger.info(
        "Loaded %s: %d nodes, %d tets, mass %.4g kg", path.name, mesh.num_nodes, mesh.num_elements, mesh.total_mass
    )
    return mesh


class MeshLoader(AbcMeshLoader):
    """File-backed mesh loader."""

    def load(self, path: Path | str, density: float) -> TetMesh:
        return load_mesh(path, density)
