"""Unit tests for the dependency injection container."""

from dependency_injector import providers

from application.services.evaluation_service import EvaluationService
from container import Container
from infrastructure.grasp_context import ContextGraspProvider
from infrastructure.io.dataset_writer import DatasetWriter
from infrastructure.io.grasp_file import read_grasps
from infrastructure.io.mesh_reader import MeshLoader
from shared.config.settings import RunConfig, load_run_config


def test_container_provides_settings():
    """Verify that the container provides settings."""
    container = Container()
    settings = container.shared.settings()
    assert isinstance(settings, RunConfig)


def test_container_provides_infrastructure():
    """Verify that the container wires the file-backed infrastructure."""
    container = Container()
    assert isinstance(container.infrastructure.grasp_context_provider(), ContextGraspProvider)
    assert isinstance(container.infrastructure.mesh_loader(), MeshLoader)
    assert container.infrastructure.grasp_reader() is read_grasps


def test_dataset_writer_is_a_factory(tmp_path):
    """Each run directory gets its own writer."""
    container = Container()
    first = container.infrastructure.dataset_writer(tmp_path / "a")
    second = container.infrastructure.dataset_writer(tmp_path / "b")
    assert isinstance(first, DatasetWriter)
    assert first is not second
    assert second.directory == tmp_path / "b"


def test_container_singleton_instances():
    """Verify that providers return singleton instances where expected."""
    container = Container()
    assert container.infrastructure.grasp_context_provider() is container.infrastructure.grasp_context_provider()
    service = container.application.evaluation_service()
    assert isinstance(service, EvaluationService)
    assert service is container.application.evaluation_service()


def test_settings_can_be_overridden(tmp_path):
    """The CLI swaps in the run configuration it loaded from --config."""
    container = Container()
    settings = load_run_config(Output={"Directory": str(tmp_path)})

    container.shared.settings.override(providers.Object(settings))

    assert container.shared.settings() is settings
