from __future__ import annotations

import logging

from cli import app

logger = logging.getLogger(__name__)


def run_cli() -> None:
    """Console-script entry point; logging is configured once the run configuration is loaded."""
    app()


if __name__ == "__main__":
    run_cli()
