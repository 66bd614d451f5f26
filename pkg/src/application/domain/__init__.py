"""Domain models."""

from application.domain.grasp_evaluation import GraspEvaluation
from application.domain.run_manifest import ManifestEntry, RunManifest

__all__ = ["GraspEvaluation", "ManifestEntry", "RunManifest"]
