"""Small geometry helpers shared by the sampler, features and metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.transform import Rotation

# Relative singular-value threshold below which a point cloud counts as collinear.
_COLLINEAR_RTOL = 1e-10


def unit(vector: NDArray[np.float64]) -> NDArray[np.float64]:
    v = np.asarray(vector, dtype=np.float64)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def rotation_about(axis: NDArray[np.float64], angle: float) -> NDArray[np.float64]:
    """Rotation matrix for ``angle`` radians about ``axis``."""
    return Rotation.from_rotvec(unit(axis) * angle).as_matrix()


def point_line_distance(
    point: NDArray[np.float64], origin: NDArray[np.float64], direction: NDArray[np.float64]
) -> float:
    """Distance from ``point`` to the infinite line through ``origin`` along ``direction``."""
    d = unit(direction)
    rel = np.asarray(point) - np.asarray(origin)
    return float(np.linalg.norm(rel - (rel @ d) * d))


@dataclass(frozen=True, eq=False)
class KabschResult:
    """Best rigid fit ``post ~ pre @ rotation.T + translation``.

    Attributes:
        rotation: (3, 3) proper rotation.
        translation: (3,) translation.
        residuals: (N, 3) post minus the rigidly moved pre positions.
        degenerate: True when the points were collinear and only the
            translation was removed.
    """

    rotation: NDArray[np.float64]
    translation: NDArray[np.float64]
    residuals: NDArray[np.float64]
    degenerate: bool = False


def kabsch(pre: NDArray[np.float64], post: NDArray[np.float64]) -> KabschResult:
    """Least-squares rigid alignment of ``pre`` onto ``post`` with uniform weights."""
    pre = np.asarray(pre, dtype=np.float64)
    post = np.asarray(post, dtype=np.float64)
    if pre.shape != post.shape:
        raise ValueError(f"point sets differ in shape: {pre.shape} vs {post.shape}")

    pre_center = pre.mean(axis=0)
    post_center = post.mean(axis=0)
    p = pre - pre_center
    q = post - post_center

    singular = np.linalg.svd(p, compute_uv=False)
    if len(singular) < 2 or singular[1] <= _COLLINEAR_RTOL * max(singular[0], np.finfo(float).tiny):
        translation = post_center - pre_center
        return KabschResult(np.eye(3), translation, post - (pre + translation), degenerate=True)

    u, _, vt = np.linalg.svd(p.T @ q)
    d = np.sign(np.linalg.det(vt.T @ u.T)) or 1.0
    rotation = vt.T @ np.diag([1.0, 1.0, d]) @ u.T
    translation = post_center - rotation @ pre_center
    residuals = post - (pre @ rotation.T + translation)
    return KabschResult(rotation, translation, residuals)
