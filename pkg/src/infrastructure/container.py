"""Infrastructure dependency injection container."""

from dependency_injector import containers, providers

from infrastructure.grasp_context import ContextGraspProvider
from infrastructure.io.dataset_writer import DatasetWriter
from infrastructure.io.grasp_file import read_grasps
from infrastructure.io.mesh_reader import MeshLoader
from infrastructure.tracing.telemetry import configure_logging, setup_telemetry


class InfrastructureContainer(containers.DeclarativeContainer):
    """Container for infrastructure layer dependencies."""

    shared = providers.DependenciesContainer()

    grasp_context_provider = providers.Singleton(ContextGraspProvider)

    mesh_loader = providers.Singleton(MeshLoader)

    dataset_writer = providers.Factory(DatasetWriter)

    grasp_reader = providers.Object(read_grasps)

    logging_initializer = providers.Object(configure_logging)

    telemetry = providers.Resource(
        setup_telemetry,
        grasp_context_provider,
        shared.settings,
    )
