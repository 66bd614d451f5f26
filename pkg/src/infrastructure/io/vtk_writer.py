"""Legacy ASCII VTK export of tetrahedral fields."""

from __future__ import annotations

import logging
from pathlib import Path

import meshio
import numpy as np
from numpy.typing import NDArray

from infrastructure.io.atomic import atomic_path
from shared.exceptions import OutputError
from shared.utils.geometry import kabsch
from simulation.fem import SimState, von_mises
from simulation.mesh import TetMesh

logger = logging.getLogger(__name__)

# meshio registers the legacy 4.2 writer as "vtk42"; plain "vtk" is 5.1
VTK_FILE_FORMAT = "vtk42"


def write_vtk(
    path: Path | str,
    positions: NDArray[np.float64],
    tets: NDArray[np.int64],
    von_mises_stress: NDArray[np.float64],
    deformation: NDArray[np.float64] | None = None,
) -> Path:
    """Write an UNSTRUCTURED_GRID of tetrahedra (cell type 10).

    Cell data ``von_mises`` is in Pa, point data ``deformation`` in m.
    """
    positions = np.asarray(positions, dtype=np.float64)
    tets = np.asarray(tets, dtype=np.int64)
    if deformation is None:
        deformation = np.zeros_like(positions)
    if len(von_mises_stress) != len(tets) or np.shape(deformation) != positions.shape:
        raise OutputError(f"field sizes do not match the mesh ({len(positions)} nodes, {len(tets)} tets)")

    grid = meshio.Mesh(
        points=positions,
        cells=[("tetra", tets)],
        point_data={"deformation": np.asarray(deformation, dtype=np.float64)},
        cell_data={"von_mises": [np.asarray(von_mises_stress, dtype=np.float64)]},
    )
    path = Path(path)
    with atomic_path(path, suffix=".vtk") as temp:
        try:
            meshio.write(temp, grid, file_format=VTK_FILE_FORMAT, binary=False)
        except (meshio.WriteError, ValueError, TypeError, KeyError) as exc:
            raise OutputError(f"cannot write VTK file {path}: {exc}") from exc
    logger.debug("Wrote %s (%d nodes, %d tets)", path, len(positions), len(tets))
    return path


def export_vtk(
    state: SimState, mesh: TetMesh, path: Path | str, reference: NDArray[np.float64] | None = None
) -> Path:
    """Export a simulation state; deformation is measured against ``reference`` with the rigid fit removed."""
    reference = mesh.nodes if reference is None else reference
    return write_vtk(
        path,
        state.positions,
        mesh.tets,
        np.asarray(von_mises(state.stresses)),
        kabsch(reference, state.positions).residuals,
    )
