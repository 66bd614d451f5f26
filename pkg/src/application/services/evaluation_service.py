"""Grasp evaluation orchestration service.

Runs squeeze, features and the enabled experiments for every grasp, then
writes the dataset tables and the manifest. Controllers (the CLI) call this
service rather than driving the simulation directly.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from opentelemetry import trace

from application.abstractions.abc_dataset_writer import AbcDatasetWriter
from application.abstractions.abc_grasp_context_provider import AbcGraspContextProvider
from application.abstractions.abc_mesh_loader import AbcMeshLoader
from application.domain.grasp_evaluation import GraspEvaluation
from application.domain.run_manifest import ManifestEntry, RunManifest
from grasping.experiments import EXPERIMENTS, GraspSession
from grasping.metrics import MetricRecord
from grasping.sampler import sample_from_settings
from shared.config.settings import RunConfig
from shared.constants import ANGULAR_ACCELERATION, LINEAR_ACCELERATION, REORIENT, ExperimentName
from shared.exceptions import ConfigurationError, SimulationError
from shared.models import GraspCandidate
from simulation.mesh import TetMesh

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

_CENSORING_EXPERIMENTS = {LINEAR_ACCELERATION, ANGULAR_ACCELERATION}

WriterFactory = Callable[..., AbcDatasetWriter]
GraspReader = Callable[[Path], list[GraspCandidate]]


@dataclass(frozen=True, eq=False)
class GraspJob:
    """One grasp at one Young's modulus; pickled to worker processes."""

    grasp: GraspCandidate
    mesh: TetMesh
    settings: RunConfig
    youngs_modulus: float
    context: AbcGraspContextProvider
    writer: AbcDatasetWriter | None = None


@dataclass(frozen=True)
class RunResult:
    """Manifests written by one run, one per Young's modulus."""

    manifests: list[RunManifest]
    directories: list[Path]

    @property
    def all_grasps_failed(self) -> bool:
        """True when grasps were given but none of them reached its grasp force."""
        return any(m.grasp_count > 0 and m.evaluated_grasps == 0 for m in self.manifests)


def evaluate_grasp(job: GraspJob) -> GraspEvaluation:
    """Prepare one grasp and run every enabled experiment on it.

    A ``SimulationError`` is recorded as a failed manifest entry; it never
    propagates. Errors writing snapshots do propagate.
    """
    grasp = job.grasp
    enabled: list[ExperimentName] = list(job.settings.experiments.enabled)
    evaluation = GraspEvaluation(grasp_id=grasp.id)

    with job.context.grasp_scope(grasp.id), tracer.start_as_current_span("grasp.evaluate") as span:
        span.set_attribute("grasp.youngs_modulus", job.youngs_modulus)
        started = time.perf_counter()
        try:
            session = GraspSession.prepare(job.mesh, job.settings, job.youngs_modulus, grasp)
        except SimulationError as exc:
            elapsed = time.perf_counter() - started
            logger.warning("Grasp %d failed during setup: %s", grasp.id, exc.message)
            span.set_attribute("grasp.failed", True)
            for name in enabled:
                evaluation.metrics.append(MetricRecord(grasp_id=grasp.id, experiment=name))
                evaluation.entries.append(
                    ManifestEntry(
                        grasp_id=grasp.id,
                        experiment=name,
                        status="failed",
                        reason=f"setup: {exc.message}",
                        wall_clock_seconds=elapsed,
                    )
                )
            return evaluation

        evaluation.features = session.features
        if job.writer is not None:
            job.writer.write_trajectory(grasp.id, job.mesh, session.setup_trajectory)

        for name in enabled:
            evaluation.entries.append(_run_experiment(job, session, name, evaluation))
    return evaluation


def _run_experiment(
    job: GraspJob, session: GraspSession, name: ExperimentName, evaluation: GraspEvaluation
) -> ManifestEntry:
    grasp_id = job.grasp.id
    experiment = EXPERIMENTS[name]()
    with job.context.experiment_scope(name), tracer.start_as_current_span(f"experiment.{name}"):
        started = time.perf_counter()
        try:
            outcome = experiment(session)
        except SimulationError as exc:
            logger.warning("%s failed for grasp %d: %s", name, grasp_id, exc.message)
            evaluation.metrics.append(MetricRecord(grasp_id=grasp_id, experiment=name))
            return ManifestEntry(
                grasp_id=grasp_id,
                experiment=name,
                status="failed",
                reason=exc.message,
                wall_clock_seconds=time.perf_counter() - started,
            )
        elapsed = time.perf_counter() - started

        evaluation.metrics.append(outcome.metrics)
        if name == REORIENT:
            evaluation.reorientation.extend(outcome.reorientation_states)
        if job.writer is not None:
            job.writer.write_trajectory(grasp_id, job.mesh, outcome.trajectory)
        return ManifestEntry(
            grasp_id=grasp_id,
            experiment=name,
            status="converged" if outcome.status == "ok" else "failed",
            reason=outcome.reason,
            wall_clock_seconds=elapsed,
            censored_dirs=outcome.censored if name in _CENSORING_EXPERIMENTS else None,
        )


class EvaluationService:
    """Batch evaluation of grasps over one or several Young's moduli."""

    def __init__(
        self,
        mesh_loader: AbcMeshLoader,
        writer_factory: WriterFactory,
        grasp_reader: GraspReader,
        grasp_context: AbcGraspContextProvider,
        worker_initializer: Callable[[str], None] | None = None,
    ) -> None:
        self._mesh_loader = mesh_loader
        self._writer_factory = writer_factory
        self._grasp_reader = grasp_reader
        self._grasp_context = grasp_context
        self._worker_initializer = worker_initializer

    def load_mesh(self, settings: RunConfig) -> TetMesh:
        """Raises ConfigurationError when no mesh is configured; mesh errors propagate."""
        if settings.body.mesh_path is None:
            raise ConfigurationError("Object.MeshPath is required")
        return self._mesh_loader.load(settings.body.mesh_path, settings.body.density)

    def resolve_grasps(self, settings: RunConfig, mesh: TetMesh) -> tuple[list[GraspCandidate], list[str]]:
        """Grasps from the configured file, or sampled; returns them with any shortfall warning."""
        source = settings.grasp_source
        if source.file is not None:
            return self._grasp_reader(source.file), []

        sampler = source.sampler
        assert sampler is not None
        grasps = sample_from_settings(
            mesh, sampler, settings.body.friction, settings.gripper, settings.contact.pad_thickness
        )
        warnings: list[str] = []
        if len(grasps) < sampler.count:
            warnings.append(f"sampler found {len(grasps)} of {sampler.count} requested grasps")
        return grasps, warnings

    def sample(self, settings: RunConfig) -> tuple[list[GraspCandidate], list[str]]:
        mesh = self.load_mesh(settings)
        if settings.grasp_source.sampler is None:
            raise ConfigurationError("GraspSource.Sampler is required for sampling")
        return self.resolve_grasps(settings, mesh)

    def run(self, settings: RunConfig, jobs: int = 1) -> RunResult:
        """Evaluate every grasp for every configured Young's modulus and write the results.

        Sweep runs write one ``E_<modulus>`` subdirectory per value under the output directory.
        """
        workers = settings.threads or jobs
        mesh = self.load_mesh(settings)
        grasps, warnings = self.resolve_grasps(settings, mesh)
        for warning in warnings:
            logger.warning("%s", warning)
        logger.info(
            "Evaluating %d grasps x %d moduli with %d worker(s): %s",
            len(grasps),
            len(settings.youngs_moduli),
            workers,
            ", ".join(settings.experiments.enabled),
        )

        manifests: list[RunManifest] = []
        directories: list[Path] = []
        for youngs_modulus in settings.youngs_moduli:
            directory = settings.output.directory
            if settings.is_sweep:
                directory = directory / f"E_{youngs_modulus:.0e}"
            manifest = self.run_modulus(
                settings.for_modulus(youngs_modulus), mesh, grasps, directory, workers, warnings
            )
            manifests.append(manifest)
            directories.append(directory)
        return RunResult(manifests=manifests, directories=directories)

    def run_modulus(
        self,
        settings: RunConfig,
        mesh: TetMesh,
        grasps: Sequence[GraspCandidate],
        directory: Path,
        workers: int = 1,
        warnings: Sequence[str] = (),
    ) -> RunManifest:
        youngs_modulus = settings.youngs_moduli[0]
        writer = self._writer_factory(directory=directory)
        snapshot_writer = writer if settings.output.export_snapshots else None
        jobs = [
            GraspJob(grasp, mesh, settings, youngs_modulus, self._grasp_context, snapshot_writer) for grasp in grasps
        ]

        with tracer.start_as_current_span("run.modulus") as span:
            span.set_attribute("run.youngs_modulus", youngs_modulus)
            evaluations = list(self._evaluate_all(jobs, workers, settings.application.log_level))

        writer.write_features([e.features for e in evaluations if e.features is not None])
        writer.write_metrics([m for e in evaluations for m in e.metrics])
        if REORIENT in settings.experiments.enabled:
            writer.write_reorientation([(e.grasp_id, s) for e in evaluations for s in e.reorientation])

        manifest = RunManifest(
            config_hash=settings.config_hash(),
            version=settings.application.version,
            youngs_modulus=youngs_modulus,
            mesh=str(settings.body.mesh_path) if settings.body.mesh_path else None,
            grasp_count=len(grasps),
            evaluated_grasps=sum(e.features is not None for e in evaluations),
            warnings=list(warnings),
            entries=[entry for e in evaluations for entry in e.entries],
        )
        writer.write_manifest(manifest)
        logger.info(
            "E=%.3g Pa: %d grasps, %d of %d experiment runs failed; results in %s",
            youngs_modulus,
            len(grasps),
            len(manifest.failed),
            len(manifest.entries),
            directory,
        )
        return manifest

    def _evaluate_all(self, jobs: list[GraspJob], workers: int, log_level: str) -> Iterator[GraspEvaluation]:
        """Evaluations in grasp order regardless of scheduling."""
        if workers <= 1 or len(jobs) <= 1:
            yield from map(evaluate_grasp, jobs)
            return
        initializer = self._worker_initializer
        with ProcessPoolExecutor(
            max_workers=min(workers, len(jobs)),
            initializer=initializer,
            initargs=(log_level,) if initializer is not None else (),
        ) as executor:
            yield from executor.map(evaluate_grasp, jobs)
