from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from shared.constants import SCHEMA_VERSION

EntryStatus = Literal["converged", "failed"]


class ManifestEntry(BaseModel):
    """Outcome of one experiment on one grasp."""

    model_config = ConfigDict(frozen=True)

    grasp_id: int
    experiment: str
    status: EntryStatus
    reason: str | None = None
    wall_clock_seconds: float = Field(ge=0.0)
    censored_dirs: int | None = None


class RunManifest(BaseModel):
    """Reproducibility record written next to the dataset tables.

    One entry per grasp and enabled experiment, ordered by grasp index.
    """

    schema_version: int = SCHEMA_VERSION
    config_hash: str
    version: str
    youngs_modulus: float
    mesh: str | None = None
    grasp_count: int = Field(ge=0)
    evaluated_grasps: int = Field(default=0, ge=0, description="Grasps that reached their grasp force")
    warnings: list[str] = Field(default_factory=list)
    entries: list[ManifestEntry] = Field(default_factory=list)

    @property
    def failed(self) -> list[ManifestEntry]:
        return [e for e in self.entries if e.status == "failed"]
