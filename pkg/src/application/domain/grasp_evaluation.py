from __future__ import annotations

from dataclasses import dataclass, field

from application.domain.run_manifest import ManifestEntry
from grasping.experiments import ReorientationState
from grasping.features import FeatureRecord
from grasping.metrics import MetricRecord


@dataclass
class GraspEvaluation:
    """Everything one grasp contributes to the dataset.

    ``features`` is None when the grasp never reached its target force.
    """

    grasp_id: int
    features: FeatureRecord | None = None
    metrics: list[MetricRecord] = field(default_factory=list)
    reorientation: list[ReorientationState] = field(default_factory=list)
    entries: list[ManifestEntry] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(e.status == "failed" for e in self.entries)
