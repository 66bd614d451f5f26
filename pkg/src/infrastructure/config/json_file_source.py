"""JSON run-configuration file settings source for Pydantic.

Reads the PascalCase run configuration (the ``DefGrasp`` section of a file
shaped like ``appsettings.json``, or a bare document with the same keys).
"""

import json
import logging
from pathlib import Path
from typing import Any

from pydantic_settings import PydanticBaseSettingsSource

from shared.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

_CONFIG_SECTION = "DefGrasp"


class JsonConfigFileSettingsSource(PydanticBaseSettingsSource):
    """A custom settings source that loads configuration from a JSON file.

    A missing path means the source contributes nothing; a path that does not
    exist or does not parse is a configuration error.
    """

    def get_field_value(self, field, field_name: str) -> tuple[Any, str, bool]:
        """Not used; the whole document is read at once in ``__call__``."""
        return None, field_name, False

    def prepare_field_value(self, field_name: str, field, value: Any, value_is_complex: bool) -> Any:
        """Not used; values are returned as-is."""
        return value

    def __init__(self, settings_cls, path: str | Path | None = None):
        super().__init__(settings_cls)
        self.path = Path(path) if path else None

    def __call__(self) -> dict[str, Any]:
        """Return a dict matching the PascalCase JSON structure mapped via field aliases."""
        if self.path is None:
            logger.debug("No run-configuration file given, skipping JSON source.")
            return {}

        if not self.path.is_file():
            raise ConfigurationError(f"Configuration file not found: {self.path}")

        try:
            document = json.loads(self.path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"Cannot read configuration file {self.path}: {exc}") from exc

        if not isinstance(document, dict):
            raise ConfigurationError(f"Configuration file {self.path} must contain a JSON object")

        config: dict[str, Any] = document.get(_CONFIG_SECTION, document)
        logger.info("Loaded %d top-level keys from %s", len(config), self.path)
        logger.debug("Loaded config sections: %s", list(config.keys()))
        return config
