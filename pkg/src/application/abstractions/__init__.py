"""Application abstractions."""

from application.abstractions.abc_dataset_writer import AbcDatasetWriter
from application.abstractions.abc_grasp_context_provider import AbcGraspContextProvider
from application.abstractions.abc_mesh_loader import AbcMeshLoader

__all__ = ["AbcDatasetWriter", "AbcGraspContextProvider", "AbcMeshLoader"]
