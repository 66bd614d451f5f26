"""Application dependency injection container."""

from dependency_injector import containers, providers

from application.services.evaluation_service import EvaluationService


class ApplicationContainer(containers.DeclarativeContainer):
    """Container for application layer dependencies."""

    infrastructure = providers.DependenciesContainer()
    shared = providers.DependenciesContainer()

    evaluation_service = providers.Singleton(
        EvaluationService,
        mesh_loader=infrastructure.mesh_loader,
        writer_factory=infrastructure.dataset_writer.provider,
        grasp_reader=infrastructure.grasp_reader,
        grasp_context=infrastructure.grasp_context_provider,
        worker_initializer=infrastructure.logging_initializer,
    )
