"""Run-configuration provider shared by every layer."""

from dependency_injector import containers, providers

from shared.config.settings import get_settings


class SharedContainer(containers.DeclarativeContainer):
    """Holds the ``RunConfig`` of the current process.

    Defaults to ``DEFGRASP_*`` environment settings; ``defgrasp run`` overrides
    it with the configuration file named by ``--config``.
    """

    settings = providers.Singleton(get_settings)
