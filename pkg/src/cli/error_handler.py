"""Map simulator exceptions to process exit codes."""

import functools
import logging
from collections.abc import Callable
from typing import ParamSpec, TypeVar

import typer

from shared.constants import EXIT_OUTPUT_ERROR
from shared.exceptions import DefGraspException

logger = logging.getLogger(__name__)

P = ParamSpec("P")
R = TypeVar("R")


def handle_errors(command: Callable[P, R]) -> Callable[P, R]:
    """Report a DefGraspException (or an I/O failure) on stderr and exit with its code."""

    @functools.wraps(command)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
        try:
            return command(*args, **kwargs)
        except DefGraspException as exc:
            logger.error("%s: %s", exc.problem_type, exc.message, exc_info=logger.isEnabledFor(logging.DEBUG))
            typer.echo(f"error [{exc.problem_type}]: {exc.message}", err=True)
            raise typer.Exit(exc.exit_code) from exc
        except OSError as exc:
            logger.error("I/O error: %s", exc, exc_info=True)
            typer.echo(f"error [output-error]: {exc}", err=True)
            raise typer.Exit(EXIT_OUTPUT_ERROR) from exc

    return wrapper
