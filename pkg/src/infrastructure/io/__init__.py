"""Mesh, grasp, dataset and snapshot files."""

from infrastructure.io.dataset_writer import DatasetWriter
from infrastructure.io.grasp_file import read_grasps, write_grasps
from infrastructure.io.mesh_reader import MeshLoader, load_mesh
from infrastructure.io.snapshots import load_snapshot
from infrastructure.io.vtk_writer import export_vtk, write_vtk

__all__ = [
    "DatasetWriter",
    "MeshLoader",
    "export_vtk",
    "load_mesh",
    "load_snapshot",
    "read_grasps",
    "write_grasps",
    "write_vtk",
]
