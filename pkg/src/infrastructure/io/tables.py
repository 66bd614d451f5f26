"""Versioned CSV tables: a schema comment line, then a fixed header."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

import pandas as pd

from infrastructure.io.atomic import write_text_atomic
from shared.constants import SCHEMA_LINE

FLOAT_FORMAT = "%.17g"
BOOLEAN_COLUMNS = frozenset({"pickup_success", "failed"})
INTEGER_COLUMNS = frozenset({"id", "grasp_id", "censored_dirs", "axis_index"})


def table_frame(rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
    """Build a frame with the given column order; booleans become ``true``/``false``, missing values stay empty."""
    frame = pd.DataFrame.from_records(list(rows), columns=list(columns))
    for column in frame.columns:
        if column in BOOLEAN_COLUMNS:
            frame[column] = frame[column].map({True: "true", False: "false"})
        elif column in INTEGER_COLUMNS:
            frame[column] = frame[column].astype("Int64")
    return frame


def render_table(rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> str:
    body = table_frame(rows, columns).to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
    return f"{SCHEMA_LINE}\n{body}"


def write_table(path: Path | str, rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> Path:
    return write_text_atomic(path, render_table(rows, columns))


def read_table(path: Path | str) -> pd.DataFrame:
    """Read a table written by :func:`write_table`; the schema comment line is skipped."""
    return pd.read_csv(path, comment="#", skip_blank_lines=True)
