"""Antipodal grasp sampling on the object surface.

A candidate starts from a surface point drawn uniformly by area. A ray is
cast from it into the object along the inward normal; the point where the
ray leaves the object is the second contact. The pair is kept when both
contact normals lie inside the friction cone around the grasp axis, the
gripper can open wide enough, and the pads do not cut into the object.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from shared.config.settings import GripperSettings, SamplerSettings
from shared.models import GraspCandidate
from shared.utils.geometry import unit
from simulation.gripper import GripperState
from simulation.mesh import TetMesh, triangle_areas, triangle_normals
from simulation.world import pads_collide

logger = logging.getLogger(__name__)

_RAY_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class SurfaceSamples:
    points: NDArray[np.float64]
    normals: NDArray[np.float64]
    triangles: NDArray[np.int64]


def sample_surface_points(mesh: TetMesh, count: int, rng: np.random.Generator) -> SurfaceSamples:
    """Points distributed uniformly by area over the boundary surface."""
    tris = mesh.surface_tris
    areas = triangle_areas(mesh.nodes, tris)
    chosen = rng.choice(len(tris), size=count, p=areas / areas.sum())
    r1 = np.sqrt(rng.random(count))
    r2 = rng.random(count)
    a, b, c = (mesh.nodes[tris[chosen, k]] for k in range(3))
    points = (1.0 - r1)[:, None] * a + (r1 * (1.0 - r2))[:, None] * b + (r1 * r2)[:, None] * c
    normals = triangle_normals(mesh.nodes, tris[chosen])
    return SurfaceSamples(points=points, normals=normals, triangles=chosen)


def raycast(
    origin: NDArray[np.float64], direction: NDArray[np.float64], triangles: NDArray[np.float64], t_min: float
) -> tuple[int, float]:
    """Nearest hit with parameter t > t_min among (T, 3, 3) triangles (Moller-Trumbore).

    Returns ``(-1, inf)`` when the ray misses every triangle.
    """
    v0, v1, v2 = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    e1 = v1 - v0
    e2 = v2 - v0
    pvec = np.cross(direction, e2)
    det = np.einsum("ij,ij->i", e1, pvec)
    valid = np.abs(det) > _RAY_EPS
    inv_det = np.zeros_like(det)
    np.divide(1.0, det, out=inv_det, where=valid)

    tvec = origin - v0
    u = np.einsum("ij,ij->i", tvec, pvec) * inv_det
    qvec = np.cross(tvec, e1)
    v = (qvec @ direction) * inv_det
    t = np.einsum("ij,ij->i", e2, qvec) * inv_det

    hit = valid & (u >= 0.0) & (v >= 0.0) & (u + v <= 1.0) & (t > t_min)
    if not hit.any():
        return -1, math.inf
    candidates = np.flatnonzero(hit)
    best = candidates[np.argmin(t[candidates])]
    return int(best), float(t[best])


def within_friction_cone(axis: NDArray[np.float64], inward_normal: NDArray[np.float64], mu: float) -> bool:
    """Angle between the grasp axis and the inward contact normal is at most atan(mu)."""
    cosine = float(np.clip(unit(axis) @ unit(inward_normal), -1.0, 1.0))
    return math.acos(cosine) <= math.atan(mu) + 1e-12


def grasp_frame(squeeze_axis: NDArray[np.float64], roll: float) -> NDArray[np.float64]:
    """Right-handed frame [squeeze, width, approach] with the approach rolled by ``roll``."""
    x = unit(squeeze_axis)
    helper = np.eye(3)[int(np.argmin(np.abs(x)))]
    e1 = unit(np.cross(x, helper))
    e2 = np.cross(x, e1)
    approach = math.cos(roll) * e1 + math.sin(roll) * e2
    width = np.cross(approach, x)
    return np.column_stack([x, width, approach])


def sample_antipodal(
    mesh: TetMesh,
    count: int,
    mu: float,
    seed: int,
    *,
    gripper: GripperSettings | None = None,
    pad_thickness: float = 0.01,
    max_attempts_factor: int = 100,
) -> list[GraspCandidate]:
    """Up to ``count`` antipodal grasps, deterministic for a given seed.

    Returns fewer candidates, with a warning, when ``max_attempts_factor * count``
    surface samples are exhausted first.
    """
    gripper = gripper or GripperSettings()
    rng = np.random.default_rng(seed)
    max_opening = gripper.max_opening
    triangles = mesh.nodes[mesh.surface_tris]
    normals = triangle_normals(mesh.nodes, mesh.surface_tris)
    surface_nodes = mesh.surface_nodes
    t_min = 1e-9 * float(np.ptp(mesh.nodes, axis=0).max())

    grasps: list[GraspCandidate] = []
    attempts = 0
    max_attempts = max_attempts_factor * count
    while len(grasps) < count and attempts < max_attempts:
        attempts += 1
        sample = sample_surface_points(mesh, 1, rng)
        roll = float(rng.uniform(0.0, 2.0 * math.pi))
        p1 = sample.points[0]
        n1 = sample.normals[0]

        hit, t = raycast(p1, -n1, triangles, t_min)
        if hit < 0:
            continue
        p2 = p1 - t * n1
        n2 = normals[hit]
        axis = p2 - p1
        width = float(np.linalg.norm(axis))
        if width > max_opening:
            continue
        if not (within_friction_cone(axis, -n1, mu) and within_friction_cone(-axis, -n2, mu)):
            continue

        separation = min(width + 2.0 * gripper.clearance, max_opening)
        rotation = grasp_frame(axis, roll)
        midpoint = 0.5 * (p1 + p2)
        pose = GripperState(
            position=midpoint,
            rotation=rotation,
            separation=separation,
            pad_width=gripper.pad_width,
            pad_length=gripper.pad_length,
            max_half_travel=gripper.max_half_travel,
        )
        if pads_collide(mesh.nodes, surface_nodes, pose, pad_thickness):
            continue
        grasps.append(GraspCandidate.from_frame(len(grasps), midpoint, rotation, separation))

    if len(grasps) < count:
        logger.warning("Antipodal sampler found %d of %d grasps in %d attempts", len(grasps), count, attempts)
    else:
        logger.info("Sampled %d antipodal grasps in %d attempts (seed %d)", len(grasps), attempts, seed)
    return grasps


def sample_from_settings(
    mesh: TetMesh, sampler: SamplerSettings, mu: float, gripper: GripperSettings, pad_thickness: float
) -> list[GraspCandidate]:
    return sample_antipodal(
        mesh,
        sampler.count,
        mu,
        sampler.seed,
        gripper=gripper,
        pad_thickness=pad_thickness,
        max_attempts_factor=sampler.max_attempts_factor,
    )
