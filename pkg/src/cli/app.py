"""Command line: ``run``, ``sample`` and ``export-vtk``."""

import logging
from pathlib import Path
from typing import Annotated

import typer
from dependency_injector import providers

from application.services.evaluation_service import EvaluationService
from cli.error_handler import handle_errors
from container import get_app_container
from infrastructure.io.grasp_file import write_grasps
from infrastructure.io.snapshots import load_snapshot
from infrastructure.io.vtk_writer import write_vtk
from infrastructure.tracing import configure_tracing, shutdown_tracing
from infrastructure.tracing.telemetry import configure_logging
from shared.config.settings import RunConfig, load_run_config
from shared.constants import EXIT_SIMULATION_ERROR

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="defgrasp",
    help="Grasp evaluation on deformable objects: squeeze, pick up, reorient and shake.",
    no_args_is_help=True,
    add_completion=False,
)

ConfigOption = Annotated[Path, typer.Option("--config", "-c", help="JSON run-configuration file")]


def _bootstrap(config: Path) -> tuple[RunConfig, EvaluationService]:
    """Load the configuration, configure logging and hand the settings to the container."""
    settings = load_run_config(config)
    configure_logging(settings.application.log_level)
    container = get_app_container()
    container.shared.settings.override(providers.Object(settings))
    logger.info("Starting %s %s", settings.application.name, settings.application.version)
    return settings, container.application.evaluation_service()


@app.command()
@handle_errors
def run(
    config: ConfigOption,
    jobs: Annotated[int, typer.Option("--jobs", "-j", min=1, help="Worker processes (DEFGRASP_THREADS wins)")] = 1,
) -> None:
    """Evaluate every grasp and write features, metrics, manifest and snapshots."""
    settings, service = _bootstrap(config)
    configure_tracing()
    try:
        result = service.run(settings, jobs=jobs)
    finally:
        shutdown_tracing()

    for manifest, directory in zip(result.manifests, result.directories, strict=True):
        for warning in manifest.warnings:
            typer.echo(f"warning: {warning}", err=True)
        failed = len(manifest.failed)
        if failed:
            typer.echo(f"{directory}: {failed} of {len(manifest.entries)} experiment runs failed", err=True)
    if result.all_grasps_failed:
        typer.echo("error [simulation-error]: no grasp reached its grasp force", err=True)
        raise typer.Exit(EXIT_SIMULATION_ERROR)


@app.command()
@handle_errors
def sample(
    config: ConfigOption,
    out: Annotated[Path, typer.Option("--out", "-o", help="Grasp CSV to write")],
) -> None:
    """Sample antipodal grasp candidates into a grasp CSV."""
    settings, service = _bootstrap(config)
    grasps, warnings = service.sample(settings)
    write_grasps(out, grasps)
    for warning in warnings:
        typer.echo(f"warning: {warning}", err=True)
    typer.echo(f"wrote {len(grasps)} grasps to {out}")


@app.command("export-vtk")
@handle_errors
def export_vtk(
    state: Annotated[Path, typer.Option("--state", "-s", help="Snapshot archive (.npz)")],
    out: Annotated[Path, typer.Option("--out", "-o", help="Legacy VTK file to write")],
) -> None:
    """Re-render a stored snapshot as legacy ASCII VTK."""
    snapshot = load_snapshot(state)
    write_vtk(out, snapshot.positions, snapshot.tets, snapshot.von_mises, snapshot.deformation)
    typer.echo(f"wrote {out} ({snapshot.label}, t={snapshot.time:.4f} s)")