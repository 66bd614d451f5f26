"""Grasp candidate files: ``id,px,py,pz,qx,qy,qz,qw,separation``."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from infrastructure.io.tables import read_table, write_table
from shared.constants import GRASP_COLUMNS
from shared.exceptions import ConfigurationError
from shared.models import GraspCandidate

logger = logging.getLogger(__name__)


def read_grasps(path: Path | str) -> list[GraspCandidate]:
    """Parse a grasp CSV; the schema comment line is optional.

    Raises:
        ConfigurationError: missing columns, duplicate ids or an invalid grasp.
    """
    path = Path(path)
    try:
        frame = read_table(path)
    except pd.errors.EmptyDataError:
        return []
    except (OSError, pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise ConfigurationError(f"cannot read grasp file {path}: {exc}") from exc

    missing = [c for c in GRASP_COLUMNS if c not in frame.columns]
    if missing:
        raise ConfigurationError(f"grasp file {path} lacks columns: {', '.join(missing)}")
    if frame["id"].duplicated().any():
        raise ConfigurationError(f"grasp file {path} repeats grasp ids")

    grasps: list[GraspCandidate] = []
    for row_number, row in enumerate(frame.itertuples(index=False), start=1):
        try:
            grasps.append(
                GraspCandidate(
                    id=int(row.id),
                    position=(float(row.px), float(row.py), float(row.pz)),
                    quaternion=(float(row.qx), float(row.qy), float(row.qz), float(row.qw)),
                    separation=float(row.separation),
                )
            )
        except (ValidationError, ValueError) as exc:
            raise ConfigurationError(f"grasp file {path}, row {row_number}: {exc}") from exc
    logger.info("Read %d grasps from %s", len(grasps), path)
    return grasps


def write_grasps(path: Path | str, grasps: Sequence[GraspCandidate]) -> Path:
    return write_table(path, (g.to_row() for g in grasps), GRASP_COLUMNS)
