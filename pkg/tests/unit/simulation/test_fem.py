"""Tests for corotational linear finite elements."""

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from shared.exceptions import ElementInversionError
from simulation.fem import (
    ElasticParams,
    ElementBasis,
    assemble_stiffness,
    corotated_strain,
    deformation_gradient,
    elastic_response,
    element_stress,
    internal_forces,
    polar_rotation,
    polar_rotations,
    strain_energy,
    von_mises,
)
from simulation.mesh import TetMesh
from simulation.primitives import box_mesh

PARAMS = ElasticParams(youngs_modulus=2.0e5, poisson_ratio=0.3, density=1000.0)


@pytest.fixture
def basis(small_box: TetMesh) -> ElementBasis:
    return ElementBasis.build(small_box, PARAMS)


class TestElasticParams:
    """Test cases for the Lame parameters."""

    def test_lame_parameters(self) -> None:
        assert PARAMS.mu == pytest.approx(2.0e5 / 2.6)
        assert PARAMS.lam == pytest.approx(2.0e5 * 0.3 / (1.3 * 0.4))

    def test_incompressible_ratio_is_rejected(self) -> None:
        with pytest.raises(ValueError):
            ElasticParams(youngs_modulus=1.0, poisson_ratio=0.5, density=1.0)


class TestPolarDecomposition:
    """Test cases for the rotation factor of F = R S."""

    def test_rotation_of_rotated_stretch(self) -> None:
        """R is recovered from F = R0 S for a symmetric positive definite S."""
        r0 = Rotation.from_rotvec([0.3, -0.5, 0.8]).as_matrix()
        s = np.array([[1.2, 0.1, 0.0], [0.1, 0.9, 0.05], [0.0, 0.05, 1.1]])

        np.testing.assert_allclose(polar_rotation(r0 @ s), r0, atol=1e-10)

    def test_rotation_is_proper(self) -> None:
        rng = np.random.default_rng(3)
        F = np.eye(3) + 0.2 * rng.standard_normal((10, 3, 3))
        F = F[np.linalg.det(F) > 0.0]

        R = polar_rotations(F)

        np.testing.assert_allclose(np.transpose(R, (0, 2, 1)) @ R, np.broadcast_to(np.eye(3), R.shape), atol=1e-10)
        np.testing.assert_allclose(np.linalg.det(R), 1.0, atol=1e-10)

    def test_inverted_gradient_raises_with_index(self) -> None:
        """det F <= 0 identifies the first offending element."""
        F = np.stack([np.eye(3), np.diag([1.0, 1.0, -1.0])])

        with pytest.raises(ElementInversionError) as exc_info:
            polar_rotations(F)

        assert exc_info.value.element_index == 1
        assert exc_info.value.determinant == pytest.approx(-1.0)


class TestVonMises:
    """Test cases for the von Mises equivalent stress."""

    def test_uniaxial_stress(self) -> None:
        assert von_mises(np.diag([5.0, 0.0, 0.0])) == pytest.approx(5.0)

    def test_hydrostatic_stress_is_zero(self) -> None:
        assert von_mises(-3.0 * np.eye(3)) == pytest.approx(0.0, abs=1e-12)

    def test_pure_shear(self) -> None:
        tau = 2.0
        sigma = np.array([[0.0, tau, 0.0], [tau, 0.0, 0.0], [0.0, 0.0, 0.0]])

        assert von_mises(sigma) == pytest.approx(np.sqrt(3.0) * tau)

    def test_batched_input(self) -> None:
        sigmas = np.stack([np.diag([1.0, 0.0, 0.0]), np.eye(3)])

        np.testing.assert_allclose(von_mises(sigmas), [1.0, 0.0], atol=1e-12)


class TestElasticResponse:
    """Test cases for internal forces, stresses and stiffness."""

    def test_rest_state_is_stress_free(self, small_box: TetMesh, basis: ElementBasis) -> None:
        response = elastic_response(small_box.nodes, small_box, basis, PARAMS)

        np.testing.assert_allclose(response.forces, 0.0, atol=1e-12)
        np.testing.assert_allclose(response.stresses, 0.0, atol=1e-9)

    def test_rigid_motion_produces_no_force(self, small_box: TetMesh, basis: ElementBasis) -> None:
        """Rotating and translating the rest shape leaves the corotated strain at zero."""
        r = Rotation.from_rotvec([0.4, 1.1, -0.7]).as_matrix()
        moved = small_box.nodes @ r.T + np.array([0.1, 0.2, 0.3])

        response = elastic_response(moved, small_box, basis, PARAMS)

        np.testing.assert_allclose(response.strains, 0.0, atol=1e-10)
        np.testing.assert_allclose(response.forces, 0.0, atol=1e-6)

    def test_random_rigid_motions_of_larger_mesh_are_stress_free(self, stressed_state) -> None:
        """A hundred random rotations and translations of a 600-element box leave no force and no energy."""
        mesh = box_mesh((5, 5, 4), (0.05, 0.05, 0.04))
        basis = ElementBasis.build(mesh, PARAMS)
        rng = np.random.default_rng(3)
        rotations = Rotation.from_rotvec(rng.uniform(-np.pi, np.pi, size=(100, 3))).as_matrix()
        shifts = rng.uniform(-0.5, 0.5, size=(100, 3))
        force_bound = 1e-8 * PARAMS.youngs_modulus * mesh.total_volume ** (2.0 / 3.0)

        for rotation, shift in zip(rotations, shifts, strict=True):
            moved = mesh.nodes @ rotation.T + shift
            state = stressed_state(moved, mesh, basis, PARAMS)

            assert np.abs(internal_forces(moved, mesh, basis, PARAMS)).max() <= force_bound
            assert strain_energy(state, mesh, basis, PARAMS) <= 1e-10

    def test_uniform_strain_patch(self, small_box: TetMesh, basis: ElementBasis) -> None:
        """An affine stretch gives identical stresses everywhere and no force on the interior node."""
        stretch = np.diag([1.01, 0.995, 1.0])
        moved = small_box.nodes @ stretch.T

        response = elastic_response(moved, small_box, basis, PARAMS)
        interior = np.setdiff1d(np.arange(small_box.num_nodes), small_box.surface_nodes)

        expected = element_stress(stretch - np.eye(3), PARAMS)
        np.testing.assert_allclose(
            response.stresses, np.broadcast_to(expected, response.stresses.shape), rtol=1e-8, atol=1e-6
        )
        np.testing.assert_allclose(response.forces[interior], 0.0, atol=1e-8)

    def test_forces_balance(self, small_box: TetMesh, basis: ElementBasis) -> None:
        """Internal forces sum to zero for any configuration."""
        rng = np.random.default_rng(0)
        moved = small_box.nodes + 1e-3 * rng.standard_normal(small_box.nodes.shape)

        forces = internal_forces(moved, small_box, basis, PARAMS)

        np.testing.assert_allclose(forces.sum(axis=0), 0.0, atol=1e-9)

    def test_forces_are_negative_energy_gradient(self, small_box: TetMesh, basis: ElementBasis, stressed_state) -> None:
        """Central differences of the strain energy match the internal forces."""
        rng = np.random.default_rng(1)
        positions = small_box.nodes + 5e-4 * rng.standard_normal(small_box.nodes.shape)
        forces = internal_forces(positions, small_box, basis, PARAMS)

        def energy(x: np.ndarray) -> float:
            state = stressed_state(x, small_box, basis, PARAMS)
            return strain_energy(state, small_box, basis, PARAMS)

        h = 1e-7
        for node, axis in [(0, 0), (7, 1), (13, 2), (26, 0)]:
            plus = positions.copy()
            minus = positions.copy()
            plus[node, axis] += h
            minus[node, axis] -= h
            gradient = (energy(plus) - energy(minus)) / (2.0 * h)
            assert -gradient == pytest.approx(forces[node, axis], rel=1e-4, abs=1e-6)

    def test_stiffness_matches_force_difference_at_rest(self, small_box: TetMesh, basis: ElementBasis) -> None:
        """At rest K du equals the force change for a small perturbation."""
        rng = np.random.default_rng(2)
        du = 1e-7 * rng.standard_normal(small_box.nodes.shape)
        rotations = np.broadcast_to(np.eye(3), (small_box.num_elements, 3, 3))

        K = assemble_stiffness(rotations, small_box, basis)
        df = internal_forces(small_box.nodes + du, small_box, basis, PARAMS)

        np.testing.assert_allclose(K @ du.ravel(), -df.ravel(), rtol=1e-3, atol=1e-7)

    def test_stiffness_is_symmetric(self, small_box: TetMesh, basis: ElementBasis) -> None:
        rotations = Rotation.from_rotvec(np.tile([0.2, 0.1, -0.3], (small_box.num_elements, 1))).as_matrix()

        K = assemble_stiffness(rotations, small_box, basis)

        assert abs(K - K.T).max() < 1e-6 * abs(K).max()


class TestStrainEnergy:
    """Test cases for strain energy."""

    def test_half_factor(self, small_box: TetMesh, basis: ElementBasis, stressed_state) -> None:
        """The full product V sigma:eps is twice the halved energy."""
        moved = small_box.nodes @ np.diag([1.02, 1.0, 1.0]).T
        state = stressed_state(moved, small_box, basis, PARAMS)

        half = strain_energy(state, small_box, basis, PARAMS)
        full = strain_energy(state, small_box, basis, PARAMS, half=False)

        assert full == pytest.approx(2.0 * half)

    def test_uniaxial_energy(self, small_box: TetMesh, basis: ElementBasis, stressed_state) -> None:
        """Uniform strain energy is V * sigma:eps / 2."""
        strain = np.diag([0.01, 0.0, 0.0])
        moved = small_box.nodes @ (np.eye(3) + strain).T
        state = stressed_state(moved, small_box, basis, PARAMS)

        sigma = element_stress(strain, PARAMS)
        expected = 0.5 * small_box.total_volume * float(np.sum(sigma * strain))
        assert strain_energy(state, small_box, basis, PARAMS) == pytest.approx(expected, rel=1e-8)

    def test_corotated_strain_of_identity(self) -> None:
        np.testing.assert_allclose(corotated_strain(np.eye(3), np.eye(3)), 0.0)

    def test_deformation_gradient_of_affine_map(self, small_box: TetMesh, basis: ElementBasis) -> None:
        A = np.array([[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.9]])

        F = deformation_gradient(small_box.nodes @ A.T, small_box.tets, basis)

        np.testing.assert_allclose(F, np.broadcast_to(A, F.shape), atol=1e-12)
