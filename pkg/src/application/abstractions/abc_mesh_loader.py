from abc import ABC, abstractmethod
from pathlib import Path

from simulation.mesh import TetMesh


class AbcMeshLoader(ABC):
    """Interface for turning a mesh file into a validated TetMesh."""

    @abstractmethod
    def load(self, path: Path | str, density: float) -> TetMesh:
        """Load the mesh at ``path`` with uniform ``density``."""
