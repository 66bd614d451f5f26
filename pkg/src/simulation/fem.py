"""Corotational linear finite elements on tetrahedra.

Per element the deformation gradient is F = Ds * Dm^-1, its rotation R comes
from the polar decomposition F = R S, and the small-strain law is applied in
the rotated frame: eps = sym(R^T F) - I, sigma = 2 mu eps + lambda tr(eps) I.
All routines are vectorised over elements.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, computed_field
from scipy.sparse import coo_matrix, csr_matrix

from shared.exceptions import ElementInversionError, SimulationError
from simulation.mesh import TetMesh

logger = logging.getLogger(__name__)

_IDENTITY = np.eye(3)
_POLAR_ORTHONORMALITY_TOL = 1e-10
_POLAR_STEP_TOL = 1e-13
_POLAR_MAX_ITERATIONS = 50


class ElasticParams(BaseModel):
    """Isotropic linear-elastic material."""

    model_config = ConfigDict(frozen=True)

    youngs_modulus: float = Field(gt=0.0, description="E in Pa")
    poisson_ratio: float = Field(ge=0.0, lt=0.5)
    density: float = Field(gt=0.0, description="kg/m^3")

    @computed_field
    @property
    def mu(self) -> float:
        """Lame shear modulus E / (2 (1 + nu))."""
        return self.youngs_modulus / (2.0 * (1.0 + self.poisson_ratio))

    @computed_field
    @property
    def lam(self) -> float:
        """Lame first parameter E nu / ((1 + nu)(1 - 2 nu))."""
        nu = self.poisson_ratio
        return self.youngs_modulus * nu / ((1.0 + nu) * (1.0 - 2.0 * nu))


@dataclass(frozen=True, eq=False)
class ElementBasis:
    """Rest-configuration quantities precomputed once per mesh.

    Attributes:
        inv_rest_shape: (M, 3, 3) Dm^-1 with Dm = [X1-X0, X2-X0, X3-X0].
        rest_volume: (M,) element volumes.
        gradients: (M, 4, 3) shape-function gradients, rows of Dm^-1 plus
            minus their sum for the first vertex.
        linear_stiffness: (M, 12, 12) small-strain element stiffness.
    """

    inv_rest_shape: NDArray[np.float64]
    rest_volume: NDArray[np.float64]
    gradients: NDArray[np.float64] = field(repr=False)
    linear_stiffness: NDArray[np.float64] = field(repr=False)

    @classmethod
    def build(cls, mesh: TetMesh, params: ElasticParams) -> ElementBasis:
        x = mesh.nodes[mesh.tets]
        dm = np.transpose(x[:, 1:, :] - x[:, :1, :], (0, 2, 1))
        inv_dm = np.linalg.inv(dm)
        gradients = np.empty((mesh.num_elements, 4, 3))
        gradients[:, 1:, :] = inv_dm
        gradients[:, 0, :] = -inv_dm.sum(axis=1)
        stiffness = _linear_element_stiffness(gradients, mesh.elem_volumes, params.mu, params.lam)
        return cls(
            inv_rest_shape=inv_dm,
            rest_volume=mesh.elem_volumes.copy(),
            gradients=gradients,
            linear_stiffness=stiffness,
        )


@dataclass(frozen=True, eq=False)
class SimState:
    """Kinematic and stress state of the object.

    Attributes:
        positions: (N, 3) current node positions.
        velocities: (N, 3) current node velocities.
        rotations: (M, 3, 3) per-element polar rotations.
        stresses: (M, 3, 3) per-element Cauchy-like corotated stress.
        time: Simulated time in seconds.
    """

    positions: NDArray[np.float64]
    velocities: NDArray[np.float64]
    rotations: NDArray[np.float64] = field(repr=False)
    stresses: NDArray[np.float64] = field(repr=False)
    time: float = 0.0

    @classmethod
    def at_rest(cls, mesh: TetMesh) -> SimState:
        m = mesh.num_elements
        return cls(
            positions=mesh.nodes.copy(),
            velocities=np.zeros_like(mesh.nodes),
            rotations=np.broadcast_to(_IDENTITY, (m, 3, 3)).copy(),
            stresses=np.zeros((m, 3, 3)),
        )


def _linear_element_stiffness(
    gradients: NDArray[np.float64], volumes: NDArray[np.float64], mu: float, lam: float
) -> NDArray[np.float64]:
    """K[a i, b j] = V (mu delta_ij G_a.G_b + mu G_a,j G_b,i + lam G_a,i G_b,j)."""
    gg = np.einsum("mak,mbk->mab", gradients, gradients)
    k = mu * gg[:, :, None, :, None] * _IDENTITY[None, None, :, None, :]
    k = k + mu * np.einsum("maj,mbi->maibj", gradients, gradients)
    k = k + lam * np.einsum("mai,mbj->maibj", gradients, gradients)
    k *= volumes[:, None, None, None, None]
    return k.reshape(-1, 12, 12)


def deformation_gradient(positions: NDArray[np.float64], tets: NDArray[np.int64], basis: ElementBasis):
    """F = Ds * Dm^-1 for every element, shape (M, 3, 3)."""
    x = positions[tets]
    ds = np.transpose(x[:, 1:, :] - x[:, :1, :], (0, 2, 1))
    return ds @ basis.inv_rest_shape


def polar_rotations(F: NDArray[np.float64]) -> NDArray[np.float64]:
    """Rotation factor R of F = R S for a stack of matrices.

    Uses the scaled Newton iteration R <- (g R + R^-T / g) / 2, which keeps
    det R > 0 and converges quadratically; iteration stops once the update is
    at round-off level and R^T R is orthonormal to 1e-10.

    Raises:
        ElementInversionError: if any det F <= 0 (first offending index).
    """
    F = np.asarray(F, dtype=np.float64)
    dets = np.linalg.det(F)
    bad = np.flatnonzero(~(dets > 0.0))
    if len(bad):
        raise ElementInversionError(int(bad[0]), float(dets[bad[0]]))

    r = F.copy()
    for _ in range(_POLAR_MAX_ITERATIONS):
        inv_t = np.transpose(np.linalg.inv(r), (0, 2, 1))
        gamma = np.sqrt(np.linalg.norm(inv_t, axis=(1, 2)) / np.linalg.norm(r, axis=(1, 2)))[:, None, None]
        r_next = 0.5 * (gamma * r + inv_t / gamma)
        step = float(np.abs(r_next - r).max())
        r = r_next
        if step <= _POLAR_STEP_TOL:
            break

    orthonormality = float(np.abs(np.transpose(r, (0, 2, 1)) @ r - _IDENTITY).max()) if len(r) else 0.0
    if orthonormality > _POLAR_ORTHONORMALITY_TOL:
        raise SimulationError(f"Polar decomposition did not converge (|R^T R - I| = {orthonormality:.3e})")
    return r


def polar_rotation(F: NDArray[np.float64]) -> NDArray[np.float64]:
    """Rotation factor of a single 3x3 deformation gradient."""
    return polar_rotations(np.asarray(F, dtype=np.float64)[None])[0]


def corotated_strain(F: NDArray[np.float64], R: NDArray[np.float64]) -> NDArray[np.float64]:
    """eps = sym(R^T F) - I, batched or single."""
    rt_f = np.swapaxes(R, -1, -2) @ F
    return 0.5 * (rt_f + np.swapaxes(rt_f, -1, -2)) - _IDENTITY


def element_stress(strain: NDArray[np.float64], params: ElasticParams) -> NDArray[np.float64]:
    """sigma = 2 mu eps + lambda tr(eps) I, batched or single."""
    trace = np.trace(strain, axis1=-2, axis2=-1)[..., None, None]
    return 2.0 * params.mu * strain + params.lam * trace * _IDENTITY


def von_mises(sigma: NDArray[np.float64]) -> NDArray[np.float64] | float:
    """sqrt(3/2 s:s) with s the deviatoric part of sigma."""
    sigma = np.asarray(sigma, dtype=np.float64)
    mean = np.trace(sigma, axis1=-2, axis2=-1)[..., None, None] / 3.0
    dev = sigma - mean * _IDENTITY
    value = np.sqrt(1.5 * np.einsum("...ij,...ij->...", dev, dev))
    return float(value) if value.ndim == 0 else value


@dataclass(frozen=True, eq=False)
class ElasticResponse:
    """Internal forces and consistent quantities at one configuration."""

    forces: NDArray[np.float64]
    rotations: NDArray[np.float64]
    stresses: NDArray[np.float64]
    strains: NDArray[np.float64]


def elastic_response(
    positions: NDArray[np.float64], mesh: TetMesh, basis: ElementBasis, params: ElasticParams
) -> ElasticResponse:
    """Internal nodal forces f_a = -V R sigma G_a summed over elements."""
    F = deformation_gradient(positions, mesh.tets, basis)
    R = polar_rotations(F)
    strain = corotated_strain(F, R)
    sigma = element_stress(strain, params)
    per_node = -basis.rest_volume[:, None, None] * np.einsum("mij,mjk,mak->mai", R, sigma, basis.gradients)
    forces = _scatter_nodes(per_node, mesh.tets, mesh.num_nodes)
    return ElasticResponse(forces=forces, rotations=R, stresses=sigma, strains=strain)


def internal_forces(
    positions: NDArray[np.float64], mesh: TetMesh, basis: ElementBasis, params: ElasticParams
) -> NDArray[np.float64]:
    """(N, 3) elastic forces on the nodes at ``positions``."""
    return elastic_response(positions, mesh, basis, params).forces


def _scatter_nodes(per_node: NDArray[np.float64], tets: NDArray[np.int64], num_nodes: int) -> NDArray[np.float64]:
    flat = tets.ravel()
    values = per_node.reshape(-1, 3)
    return np.stack([np.bincount(flat, weights=values[:, k], minlength=num_nodes) for k in range(3)], axis=1)


def assemble_stiffness(rotations: NDArray[np.float64], mesh: TetMesh, basis: ElementBasis) -> csr_matrix:
    """Global stiffness -df/dx with rotations held fixed, (3N, 3N) CSR."""
    k = basis.linear_stiffness.reshape(-1, 4, 3, 4, 3)
    rotated = np.einsum("mik,makbl,mjl->maibj", rotations, k, rotations, optimize=True).reshape(-1, 144)
    dofs = (3 * mesh.tets[:, :, None] + np.arange(3)).reshape(-1, 12)
    rows = np.repeat(dofs, 12, axis=1).ravel()
    cols = np.tile(dofs, (1, 12)).ravel()
    size = 3 * mesh.num_nodes
    return coo_matrix((rotated.ravel(), (rows, cols)), shape=(size, size)).tocsr()


def element_energies(
    stresses: NDArray[np.float64], strains: NDArray[np.float64], volumes: NDArray[np.float64], half: bool = True
) -> NDArray[np.float64]:
    """Per-element strain energy V * sigma:eps, halved by default."""
    density = np.einsum("mij,mij->m", stresses, strains)
    return (0.5 if half else 1.0) * volumes * density


def strain_energy(
    state: SimState, mesh: TetMesh, basis: ElementBasis, params: ElasticParams, half: bool = True
) -> float:
    """Total strain energy of ``state`` in joules."""
    F = deformation_gradient(state.positions, mesh.tets, basis)
    strain = corotated_strain(F, state.rotations)
    sigma = element_stress(strain, params)
    return float(element_energies(sigma, strain, basis.rest_volume, half).sum())
