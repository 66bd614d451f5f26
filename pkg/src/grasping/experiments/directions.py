"""The fixed set of 16 test directions: 8 base vectors and their complements."""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray

_S3 = 1.0 / math.sqrt(3.0)
_S2 = 1.0 / math.sqrt(2.0)

BASE_DIRECTIONS = np.array(
    [
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [_S3, _S3, _S3],
        [-_S3, _S3, _S3],
        [_S3, -_S3, _S3],
        [_S3, _S3, -_S3],
        [_S2, _S2, 0.0],
    ]
)


def direction_set_16() -> NDArray[np.float64]:
    """(16, 3) unit vectors; row ``k + 8`` is the complement of row ``k``."""
    return np.concatenate([BASE_DIRECTIONS, -BASE_DIRECTIONS])


def select_directions(indices: list[int] | None) -> list[tuple[int, NDArray[np.float64]]]:
    """``(index, direction)`` pairs, all 16 when ``indices`` is None."""
    directions = direction_set_16()
    chosen = range(len(directions)) if indices is None else indices
    return [(i, directions[i]) for i in chosen]
