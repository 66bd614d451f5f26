"""Tetrahedral mesh model.

Validates connectivity and orientation, and precomputes the per-element rest
volumes, lumped nodal masses and the oriented boundary surface that the rest
of the simulator relies on.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from shared.exceptions import MeshValidationError

logger = logging.getLogger(__name__)

# Faces of a positively oriented tet (v0, v1, v2, v3), each wound so that its
# normal points away from the vertex it omits.
_TET_FACES = np.array([[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]], dtype=np.int64)

_DEGENERATE_VOLUME_RTOL = 1e-12


def signed_volumes(nodes: NDArray[np.float64], tets: NDArray[np.int64]) -> NDArray[np.float64]:
    """Signed volume of every tet, positive for right-handed vertex order."""
    p = nodes[tets]
    edges = p[:, 1:, :] - p[:, :1, :]
    return np.linalg.det(edges) / 6.0


def element_volume(points: NDArray[np.float64]) -> float:
    """Unsigned volume of one tetrahedron given as a (4, 3) array."""
    points = np.asarray(points, dtype=np.float64)
    return float(abs(np.linalg.det(points[1:] - points[0])) / 6.0)


def extract_surface(tets: NDArray[np.int64], nodes: NDArray[np.float64] | None = None) -> NDArray[np.int64]:
    """Boundary triangles: faces used by exactly one tet, oriented outward.

    Faces are returned in the order their owning tets appear. When ``nodes``
    is given the winding is additionally checked against the owning tet's
    centroid so that meshes with mixed local ordering still come out outward.
    """
    tets = np.asarray(tets, dtype=np.int64)
    faces = tets[:, _TET_FACES].reshape(-1, 3)
    owners = np.repeat(np.arange(len(tets)), 4)

    keys = np.sort(faces, axis=1)
    _, first_index, inverse, counts = np.unique(
        keys, axis=0, return_index=True, return_inverse=True, return_counts=True
    )
    boundary = counts[inverse.ravel()] == 1
    order = np.flatnonzero(boundary)
    surface = faces[order]

    if nodes is not None and len(surface):
        centroids = nodes[tets[owners[order]]].mean(axis=1)
        a, b, c = (nodes[surface[:, k]] for k in range(3))
        normals = np.cross(b - a, c - a)
        outward = np.einsum("ij,ij->i", normals, a - centroids)
        flip = outward < 0.0
        surface[flip] = surface[flip][:, [0, 2, 1]]

    logger.debug("Extracted %d boundary faces from %d unique faces", len(surface), len(first_index))
    return surface


def triangle_areas(nodes: NDArray[np.float64], triangles: NDArray[np.int64]) -> NDArray[np.float64]:
    a, b, c = (nodes[triangles[:, k]] for k in range(3))
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


def triangle_normals(nodes: NDArray[np.float64], triangles: NDArray[np.int64]) -> NDArray[np.float64]:
    """Unit normals of the given triangles (right-hand winding)."""
    a, b, c = (nodes[triangles[:, k]] for k in range(3))
    n = np.cross(b - a, c - a)
    return n / np.linalg.norm(n, axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class TetMesh:
    """Validated linear tetrahedral mesh with uniform density.

    Attributes:
        nodes: (N, 3) rest positions in metres.
        tets: (M, 4) node indices, positively oriented.
        density: Mass density in kg/m^3.
        surface_tris: (S, 3) outward-oriented boundary triangles.
        elem_volumes: (M,) rest volumes.
        node_masses: (N,) lumped masses, one quarter of each incident element's mass.
    """

    nodes: NDArray[np.float64]
    tets: NDArray[np.int64]
    density: float
    surface_tris: NDArray[np.int64] = field(repr=False)
    elem_volumes: NDArray[np.float64] = field(repr=False)
    node_masses: NDArray[np.float64] = field(repr=False)

    @classmethod
    def from_arrays(cls, nodes: NDArray, tets: NDArray, density: float = 1000.0) -> TetMesh:
        """Build a mesh, rejecting anything the simulator cannot use.

        Raises:
            MeshValidationError: empty mesh, out-of-range indices, inverted or
                degenerate elements, unreferenced nodes or several components.
        """
        nodes = np.ascontiguousarray(nodes, dtype=np.float64)
        tets = np.ascontiguousarray(tets, dtype=np.int64)

        if density <= 0.0:
            raise MeshValidationError(f"density must be positive, got {density}")
        if nodes.ndim != 2 or nodes.shape[1] != 3 or len(nodes) == 0:
            raise MeshValidationError("nodes must be a non-empty (N, 3) array")
        if tets.ndim != 2 or tets.shape[1] != 4 or len(tets) == 0:
            raise MeshValidationError("tets must be a non-empty (M, 4) array")
        if not np.all(np.isfinite(nodes)):
            raise MeshValidationError("node coordinates must be finite")
        if tets.min() < 0 or tets.max() >= len(nodes):
            bad = int(np.flatnonzero((tets < 0).any(axis=1) | (tets >= len(nodes)).any(axis=1))[0])
            raise MeshValidationError(f"element {bad} references a node outside 0..{len(nodes) - 1}", bad)

        volumes = signed_volumes(nodes, tets)
        scale = float(np.ptp(nodes, axis=0).max()) ** 3
        degenerate = np.abs(volumes) <= _DEGENERATE_VOLUME_RTOL * max(scale, np.finfo(float).tiny)
        if degenerate.any():
            bad = int(np.flatnonzero(degenerate)[0])
            raise MeshValidationError(f"element {bad} is degenerate (volume {volumes[bad]:.3e})", bad)
        if (volumes < 0.0).any():
            bad = int(np.flatnonzero(volumes < 0.0)[0])
            raise MeshValidationError(f"element {bad} is inverted (signed volume {volumes[bad]:.3e})", bad)

        referenced = np.zeros(len(nodes), dtype=bool)
        referenced[tets.ravel()] = True
        if not referenced.all():
            raise MeshValidationError(f"{int((~referenced).sum())} nodes are not used by any element")

        rows = np.repeat(tets, 4, axis=1).ravel()
        cols = np.tile(tets, (1, 4)).ravel()
        adjacency = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(nodes), len(nodes)))
        n_components, _ = connected_components(adjacency, directed=False)
        if n_components != 1:
            raise MeshValidationError(f"mesh is disconnected ({n_components} components)")

        masses = np.bincount(tets.ravel(), weights=np.repeat(density * volumes / 4.0, 4), minlength=len(nodes))
        surface = extract_surface(tets, nodes)

        logger.debug("Mesh: %d nodes, %d tets, %d surface triangles", len(nodes), len(tets), len(surface))
        return cls(
            nodes=nodes,
            tets=tets,
            density=float(density),
            surface_tris=surface,
            elem_volumes=volumes,
            node_masses=masses,
        )

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_elements(self) -> int:
        return len(self.tets)

    @property
    def total_mass(self) -> float:
        return float(self.node_masses.sum())

    @property
    def total_volume(self) -> float:
        return float(self.elem_volumes.sum())

    @property
    def surface_nodes(self) -> NDArray[np.int64]:
        """Sorted indices of nodes lying on the boundary surface."""
        return np.unique(self.surface_tris)

    def center_of_mass(self, positions: NDArray[np.float64] | None = None) -> NDArray[np.float64]:
        """Mass-weighted centroid of ``positions`` (rest nodes by default)."""
        x = self.nodes if positions is None else positions
        return self.node_masses @ x / self.total_mass

    def characteristic_length(self) -> float:
        """Mean boundary edge length, the contact-stiffness length scale."""
        tri = self.surface_tris
        edges = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
        lengths = np.linalg.norm(self.nodes[edges[:, 0]] - self.nodes[edges[:, 1]], axis=1)
        return float(lengths.mean())

    def node_surface_areas(self) -> NDArray[np.float64]:
        """Area attributed to each node: one third of every incident boundary triangle."""
        areas = triangle_areas(self.nodes, self.surface_tris)
        return np.bincount(self.surface_tris.ravel(), weights=np.repeat(areas / 3.0, 3), minlength=self.num_nodes)
