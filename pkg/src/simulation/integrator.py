"""Backward-Euler time stepping with Newton iterations.

Unknowns are the end-of-step velocities of all nodes plus any extra
generalised DOFs a coupling contributes (the finger separation). Each
iteration solves

    (M + dt (alpha M + beta K) + dt^2 (K + K_c)) dv = -(M (v - v0) - dt f(x0 + dt v, v))

with the corotational stiffness K evaluated at the current iterate and held
rotations, and K_c the contact stiffness.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Protocol

import numpy as np
from numpy.typing import NDArray
from scipy.sparse import coo_matrix, csr_matrix, diags
from scipy.sparse.linalg import LinearOperator, cg, spsolve

from shared.config.settings import SimulationSettings
from shared.exceptions import LinearSolveError, NewtonConvergenceError
from simulation.fem import ElasticParams, ElementBasis, SimState, assemble_stiffness, elastic_response
from simulation.mesh import TetMesh

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverOptions:
    """Numerical parameters of one implicit step."""

    gravity: NDArray[np.float64] = field(default_factory=lambda: np.array([0.0, 0.0, -9.81]))
    rayleigh_alpha: float = 0.0
    rayleigh_beta: float = 0.002
    newton_tolerance: float = 1e-6
    newton_absolute_tolerance: float = 1e-12
    newton_max_iterations: int = 20
    direct_solver_max_unknowns: int = 10_000
    cg_tolerance: float = 1e-8

    @classmethod
    def from_settings(cls, settings: SimulationSettings) -> SolverOptions:
        return cls(
            gravity=np.array([0.0, 0.0, -settings.gravity]),
            rayleigh_alpha=settings.rayleigh_alpha,
            rayleigh_beta=settings.rayleigh_beta,
            newton_tolerance=settings.newton_tolerance,
            newton_absolute_tolerance=settings.newton_absolute_tolerance,
            newton_max_iterations=settings.newton_max_iterations,
            direct_solver_max_unknowns=settings.direct_solver_max_unknowns,
            cg_tolerance=settings.cg_tolerance,
        )

    def without_gravity(self) -> SolverOptions:
        return replace(self, gravity=np.zeros(3))


@dataclass(frozen=True)
class BoundaryConditions:
    """Nodes whose velocity is prescribed for the step (zero clamps by default)."""

    nodes: NDArray[np.int64] = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    velocities: NDArray[np.float64] | None = None

    @classmethod
    def clamped(cls, nodes) -> BoundaryConditions:
        nodes = np.asarray(nodes, dtype=np.int64)
        return cls(nodes=nodes, velocities=np.zeros((len(nodes), 3)))

    def dofs(self) -> NDArray[np.int64]:
        return (3 * self.nodes[:, None] + np.arange(3)).ravel()

    def values(self) -> NDArray[np.float64]:
        if self.velocities is None:
            return np.zeros(3 * len(self.nodes))
        return np.asarray(self.velocities, dtype=np.float64).ravel()


@dataclass(frozen=True, eq=False)
class CouplingTerms:
    """Forces and stiffness a coupling adds at one iterate.

    ``rows``/``cols``/``vals`` are stiffness triplets (position units) over
    the generalised DOF vector; ``extra_damping`` is a diagonal velocity
    damping on the extra DOFs.
    """

    node_forces: NDArray[np.float64]
    extra_forces: NDArray[np.float64]
    rows: NDArray[np.int64]
    cols: NDArray[np.int64]
    vals: NDArray[np.float64]
    extra_damping: NDArray[np.float64]
    payload: object = None


class StepCoupling(Protocol):
    """Rigid bodies and extra DOFs solved together with the elastic object."""

    @property
    def extra_masses(self) -> NDArray[np.float64]: ...

    def evaluate(
        self,
        positions: NDArray[np.float64],
        velocities: NDArray[np.float64],
        extra_positions: NDArray[np.float64],
        extra_velocities: NDArray[np.float64],
        dt: float,
    ) -> CouplingTerms: ...


@dataclass(frozen=True, eq=False)
class StepResult:
    state: SimState
    extra_positions: NDArray[np.float64]
    extra_velocities: NDArray[np.float64]
    iterations: int
    residual: float
    terms: CouplingTerms | None = None


def solve_linear(matrix: csr_matrix, rhs: NDArray[np.float64], options: SolverOptions) -> NDArray[np.float64]:
    """Direct sparse factorisation for small systems, Jacobi-preconditioned CG otherwise."""
    size = matrix.shape[0]
    if size <= options.direct_solver_max_unknowns:
        solution = spsolve(matrix.tocsc(), rhs)
    else:
        inv_diag = 1.0 / matrix.diagonal()
        preconditioner = LinearOperator((size, size), matvec=lambda r: inv_diag * r, dtype=np.float64)
        solution, info = cg(matrix, rhs, rtol=options.cg_tolerance, atol=0.0, maxiter=10 * size, M=preconditioner)
        if info != 0:
            raise LinearSolveError(f"conjugate gradients stopped with info={info} on {size} unknowns")
    solution = np.asarray(solution, dtype=np.float64)
    if not np.all(np.isfinite(solution)):
        raise LinearSolveError(f"linear solve produced non-finite values on {size} unknowns")
    return solution


def step_implicit(
    state: SimState,
    dt: float,
    external_forces: NDArray[np.float64] | None,
    boundary: BoundaryConditions | None,
    params: ElasticParams,
    basis: ElementBasis,
    mesh: TetMesh,
    options: SolverOptions,
    coupling: StepCoupling | None = None,
    extra_positions: NDArray[np.float64] | None = None,
    extra_velocities: NDArray[np.float64] | None = None,
) -> StepResult:
    """Advance ``state`` by one backward-Euler step of size ``dt``.

    Raises:
        NewtonConvergenceError: residual above tolerance after the iteration budget.
        ElementInversionError: an iterate inverts an element.
        LinearSolveError: the Newton system cannot be solved.
    """
    n_nodes = mesh.num_nodes
    n = 3 * n_nodes
    extra_masses = coupling.extra_masses if coupling is not None else np.zeros(0)
    n_extra = len(extra_masses)
    q0 = np.zeros(n_extra) if extra_positions is None else np.asarray(extra_positions, dtype=np.float64)
    u0 = np.zeros(n_extra) if extra_velocities is None else np.asarray(extra_velocities, dtype=np.float64)

    node_mass = np.repeat(mesh.node_masses, 3)
    mass = np.concatenate([node_mass, extra_masses])
    x0 = state.positions
    w_old = np.concatenate([state.velocities.ravel(), u0])
    w = w_old.copy()

    applied = np.zeros((n_nodes, 3)) if external_forces is None else np.asarray(external_forces, dtype=np.float64)
    f_ext = applied + mesh.node_masses[:, None] * options.gravity

    fixed = boundary.dofs() if boundary is not None else np.zeros(0, dtype=np.int64)
    if len(fixed):
        w[fixed] = boundary.values()
    free = np.setdiff1d(np.arange(n + n_extra), fixed, assume_unique=True)

    residual_norm = np.inf
    for iteration in range(options.newton_max_iterations + 1):
        v = w[:n].reshape(n_nodes, 3)
        u = w[n:]
        x = x0 + dt * v
        q = q0 + dt * u

        response = elastic_response(x, mesh, basis, params)
        stiffness = assemble_stiffness(response.rotations, mesh, basis)
        terms = coupling.evaluate(x, v, q, u, dt) if coupling is not None else None

        damping = options.rayleigh_alpha * node_mass * w[:n] + options.rayleigh_beta * (stiffness @ w[:n])
        force = np.empty(n + n_extra)
        force[:n] = (response.forces + f_ext).ravel() - damping
        external_scale = f_ext.copy()
        if terms is not None:
            force[:n] += terms.node_forces.ravel()
            force[n:] = terms.extra_forces - terms.extra_damping * u
            external_scale += terms.node_forces

        g = mass * (w - w_old) - dt * force
        residual_norm = float(np.abs(g[free]).max()) / dt if len(free) else 0.0
        scale = max(float(np.abs(external_scale).max()), float(np.abs(response.forces).max()))
        if n_extra and terms is not None:
            scale = max(scale, float(np.abs(terms.extra_forces).max()))
        tolerance = options.newton_tolerance * scale + options.newton_absolute_tolerance

        if residual_norm <= tolerance:
            new_state = SimState(
                positions=x,
                velocities=v.copy(),
                rotations=response.rotations,
                stresses=response.stresses,
                time=state.time + dt,
            )
            return StepResult(new_state, q, u.copy(), iteration, residual_norm, terms)
        if iteration == options.newton_max_iterations:
            break

        system = _system_matrix(stiffness, node_mass, extra_masses, terms, dt, options, n, n_extra)
        reduced = system[free][:, free]
        delta = solve_linear(reduced.tocsr(), -g[free], options)
        w[free] += delta

    logger.debug("Newton failed: residual %.3e N after %d iterations", residual_norm, options.newton_max_iterations)
    raise NewtonConvergenceError(residual_norm, options.newton_max_iterations)


def _system_matrix(
    stiffness: csr_matrix,
    node_mass: NDArray[np.float64],
    extra_masses: NDArray[np.float64],
    terms: CouplingTerms | None,
    dt: float,
    options: SolverOptions,
    n: int,
    n_extra: int,
) -> csr_matrix:
    size = n + n_extra
    diagonal = np.concatenate([node_mass * (1.0 + dt * options.rayleigh_alpha), extra_masses])
    coefficient = dt * dt + dt * options.rayleigh_beta
    k = coo_matrix(stiffness)
    rows, cols, vals = [k.row], [k.col], [coefficient * k.data]
    if terms is not None:
        rows.append(terms.rows)
        cols.append(terms.cols)
        vals.append(dt * dt * terms.vals)
        diagonal[n:] += dt * terms.extra_damping
    system = coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(size, size)
    ).tocsr()
    return system + diags(diagonal)
