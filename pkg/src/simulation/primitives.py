"""Primitive tetrahedral meshes: cube, structured box and ellipsoid.

Used by the demo configuration and throughout the test-suite; real objects
are loaded from mesh files.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from simulation.mesh import TetMesh, signed_volumes

# Corner k of a unit cell has offset ((k >> 0) & 1, (k >> 1) & 1, (k >> 2) & 1).
_CORNERS = np.array([[(k >> 0) & 1, (k >> 1) & 1, (k >> 2) & 1] for k in range(8)], dtype=np.float64)

# Four corner tets plus the central regular tet.
_FIVE_TETS = np.array(
    [[0, 1, 2, 4], [3, 2, 1, 7], [5, 1, 4, 7], [6, 4, 2, 7], [1, 2, 4, 7]],
    dtype=np.int64,
)

# Kuhn split of a cell along its 0-7 diagonal, one tet per axis permutation.
_KUHN_TETS = np.array(
    [[0, 1, 3, 7], [0, 1, 5, 7], [0, 2, 3, 7], [0, 2, 6, 7], [0, 4, 5, 7], [0, 4, 6, 7]],
    dtype=np.int64,
)


def _orient(nodes: NDArray[np.float64], tets: NDArray[np.int64]) -> NDArray[np.int64]:
    """Swap two vertices of every negatively oriented tet."""
    tets = tets.copy()
    negative = signed_volumes(nodes, tets) < 0.0
    tets[negative] = tets[negative][:, [0, 2, 1, 3]]
    return tets


def unit_cube_five_tets(size: float = 1.0, density: float = 1000.0) -> TetMesh:
    """Cube [0, size]^3 split into five tetrahedra."""
    nodes = size * _CORNERS
    return TetMesh.from_arrays(nodes, _orient(nodes, _FIVE_TETS), density)


def box_nodes_and_tets(
    divisions: tuple[int, int, int], size: tuple[float, float, float]
) -> tuple[NDArray[np.float64], NDArray[np.int64]]:
    """Structured grid of a box centered at the origin, six tets per cell."""
    nx, ny, nz = divisions
    axes = [np.linspace(-0.5 * s, 0.5 * s, n + 1) for s, n in zip(size, divisions, strict=True)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)

    def index(i, j, k):
        return (i * (ny + 1) + j) * (nz + 1) + k

    i, j, k = (a.ravel() for a in np.meshgrid(np.arange(nx), np.arange(ny), np.arange(nz), indexing="ij"))
    corners = np.stack(
        [index(i + dx, j + dy, k + dz) for dx, dy, dz in _CORNERS.astype(np.int64)],
        axis=1,
    )
    tets = corners[:, _KUHN_TETS].reshape(-1, 4)
    return grid, _orient(grid, tets)


def box_mesh(
    divisions: tuple[int, int, int],
    size: tuple[float, float, float],
    center: tuple[float, float, float] = (0.0, 0.0, 0.0),
    density: float = 1000.0,
) -> TetMesh:
    """Box of the given size, ``6 * nx * ny * nz`` tets."""
    nodes, tets = box_nodes_and_tets(divisions, size)
    return TetMesh.from_arrays(nodes + np.asarray(center), tets, density)


def ball_mesh(
    radii: tuple[float, float, float],
    divisions: int = 6,
    center: tuple[float, float, float] = (0.0, 0.0, 0.0),
    density: float = 1000.0,
) -> TetMesh:
    """Ellipsoid obtained by mapping a structured cube onto the ball.

    Each grid point x of the cube [-1, 1]^3 moves to x * |x|_inf / |x|_2, which
    keeps concentric cube shells as spheres; the result is then scaled per axis.
    """
    nodes, tets = box_nodes_and_tets((divisions,) * 3, (2.0, 2.0, 2.0))
    inf_norm = np.abs(nodes).max(axis=1)
    two_norm = np.linalg.norm(nodes, axis=1)
    scale = np.divide(inf_norm, two_norm, out=np.zeros_like(two_norm), where=two_norm > 0.0)
    mapped = nodes * scale[:, None] * np.asarray(radii) + np.asarray(center)
    return TetMesh.from_arrays(mapped, _orient(mapped, tets), density)
