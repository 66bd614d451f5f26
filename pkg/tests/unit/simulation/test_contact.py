"""Tests for penalty contact and Coulomb friction."""

import numpy as np
import pytest

from simulation.contact import (
    FINGER_0,
    FINGER_1,
    PLATFORM,
    ContactModel,
    ContactSet,
    PadGeometry,
    contact_forces,
    detect_contacts,
    friction_forces,
    pad_gap,
)
from simulation.gripper import GripperState

POINTS = np.array(
    [
        [0.0, 0.0, -0.001],  # below the platform
        [0.0, 0.0, 0.0],  # exactly on the face
        [0.0, 0.0, 0.002],  # above
        [0.5, 0.5, -0.003],
    ]
)


def pad_at_origin(half_width: float = 0.01, half_length: float = 0.02, margin: float = 0.0) -> PadGeometry:
    """A finger pad facing +x with its face at x = 0."""
    return PadGeometry(
        body=FINGER_0,
        center=np.zeros(3),
        normal=np.array([1.0, 0.0, 0.0]),
        width_axis=np.array([0.0, 1.0, 0.0]),
        length_axis=np.array([0.0, 0.0, 1.0]),
        half_width=half_width,
        half_length=half_length,
        thickness=0.01,
        margin=margin,
    )


class TestDetectContacts:
    """Test cases for detect_contacts."""

    def test_platform_contacts_and_depths(self) -> None:
        """Nodes on or below the platform face are in contact, with their depth."""
        contacts = detect_contacts(POINTS, np.arange(4), PadGeometry.platform(0.0))

        np.testing.assert_array_equal(contacts.nodes, [0, 1, 3])
        np.testing.assert_allclose(contacts.penetration, [0.001, 0.0, 0.003])
        assert contacts.body == PLATFORM

    def test_only_surface_nodes_are_candidates(self) -> None:
        contacts = detect_contacts(POINTS, np.array([1, 2]), PadGeometry.platform(0.0))

        np.testing.assert_array_equal(contacts.nodes, [1])

    def test_pad_rectangle_bounds(self) -> None:
        """Nodes outside the pad rectangle are ignored unless within the margin."""
        points = np.array([[-0.001, 0.0, 0.0], [-0.001, 0.0105, 0.0], [-0.001, 0.0, 0.03], [0.001, 0.0, 0.0]])

        strict = detect_contacts(points, np.arange(4), pad_at_origin())
        loose = detect_contacts(points, np.arange(4), pad_at_origin(margin=0.001))

        np.testing.assert_array_equal(strict.nodes, [0])
        np.testing.assert_array_equal(loose.nodes, [0, 1])

    def test_pad_coordinates(self) -> None:
        points = np.array([[-0.002, 0.004, -0.005]])

        contacts = detect_contacts(points, np.arange(1), pad_at_origin())

        np.testing.assert_allclose(contacts.pad_coords, [[0.004, -0.005]])
        np.testing.assert_allclose(contacts.penetration, [0.002])

    def test_rows_follow_node_order(self) -> None:
        contacts = detect_contacts(POINTS, np.arange(4), PadGeometry.platform(0.0))

        np.testing.assert_array_equal(contacts.nodes, [0, 1, 3])
        assert contacts.penetration[2] == pytest.approx(0.003)
        assert contacts.positions.shape == (3, 3)

    def test_empty_set(self) -> None:
        empty = ContactSet.empty(FINGER_1, np.array([-1.0, 0.0, 0.0]))

        assert len(empty) == 0
        assert empty.positions.shape == (0, 3)


class TestPadGap:
    """Test cases for the pad-to-object gap."""

    def test_nearest_node_in_front(self) -> None:
        points = np.array([[0.004, 0.0, 0.0], [0.002, 0.005, 0.01], [0.001, 0.05, 0.0]])

        assert pad_gap(points, np.arange(3), pad_at_origin()) == pytest.approx(0.002)

    def test_penetrating_node_gives_negative_gap(self) -> None:
        points = np.array([[0.004, 0.0, 0.0], [-0.003, 0.0, 0.0]])

        assert pad_gap(points, np.arange(2), pad_at_origin()) == pytest.approx(-0.003)

    def test_nothing_over_the_pad(self) -> None:
        points = np.array([[0.004, 0.05, 0.0], [-0.02, 0.0, 0.0]])

        assert pad_gap(points, np.arange(2), pad_at_origin()) is None


class TestFriction:
    """Test cases for the stick/slip friction law."""

    def test_stick_inside_cone(self) -> None:
        """A small trial displacement is held by the tangential spring."""
        force, slipping = friction_forces(np.array([10.0]), np.array([[1e-4, 0.0, 0.0]]), mu=0.5, k_t=1000.0)

        np.testing.assert_allclose(force, [[-0.1, 0.0, 0.0]])
        assert not slipping[0]

    def test_slip_on_cone_boundary(self) -> None:
        """A large trial displacement is clamped to mu * f_n, opposing the motion."""
        force, slipping = friction_forces(np.array([10.0]), np.array([[0.0, 1.0, 0.0]]), mu=0.5, k_t=1000.0)

        np.testing.assert_allclose(force, [[0.0, -5.0, 0.0]])
        assert slipping[0]

    def test_zero_normal_force_gives_no_friction(self) -> None:
        force, slipping = friction_forces(np.array([0.0]), np.array([[1e-3, 0.0, 0.0]]), mu=0.5, k_t=1000.0)

        np.testing.assert_allclose(force, 0.0)
        assert slipping[0]


class TestContactForces:
    """Test cases for contact_forces."""

    def test_normal_force_is_linear_in_penetration(self) -> None:
        contacts = detect_contacts(POINTS, np.arange(4), PadGeometry.platform(0.0))
        zeros = np.zeros((len(contacts), 3))

        forces = contact_forces(contacts, zeros, zeros, mu=0.5, k_n=1000.0, k_t=1000.0, dt=0.01)

        np.testing.assert_allclose(forces.normal[:, 2], [1.0, 0.0, 3.0])
        np.testing.assert_allclose(forces.tangential, 0.0)

    def test_friction_opposes_tangential_velocity(self) -> None:
        contacts = detect_contacts(POINTS[:1], np.arange(1), PadGeometry.platform(0.0))
        velocity = np.array([[0.01, 0.0, -0.5]])

        forces = contact_forces(contacts, velocity, np.zeros((1, 3)), mu=0.5, k_n=1000.0, k_t=1000.0, dt=0.001)

        assert forces.tangential[0, 0] < 0.0
        assert forces.tangential[0, 2] == pytest.approx(0.0)
        np.testing.assert_allclose(forces.offsets, -forces.tangential / 1000.0)


class TestContactModel:
    """Test cases for the stateful ContactModel."""

    @pytest.fixture
    def model(self) -> ContactModel:
        return ContactModel(np.arange(4), 4, mu=0.5, k_n=1000.0, k_t=1000.0, pad_thickness=0.01, margin=0.0)

    @pytest.fixture
    def gripper(self) -> GripperState:
        """Gripper far above the points so that only the platform touches."""
        return GripperState.from_pose(np.array([0.0, 0.0, 10.0]), np.array([0.0, 0.0, 0.0, 1.0]), 0.05)

    def test_platform_contact_force(self, model: ContactModel, gripper: GripperState) -> None:
        evaluation = model.evaluate(POINTS, np.zeros((4, 3)), gripper, 0.0, 0.0, 0.01)

        assert evaluation.count(PLATFORM) == 3
        assert evaluation.count(FINGER_0) == 0
        assert evaluation.normal_total(PLATFORM) == pytest.approx(4.0)
        np.testing.assert_allclose(evaluation.node_forces[:, 2], [1.0, 0.0, 0.0, 3.0])

    def test_disabled_pads_are_not_evaluated(self, model: ContactModel, gripper: GripperState) -> None:
        model.pads_enabled = False

        evaluation = model.evaluate(POINTS, np.zeros((4, 3)), gripper, None, 0.0, 0.01)

        assert evaluation.sets == {}
        np.testing.assert_allclose(evaluation.node_forces, 0.0)

    def test_commit_stores_and_resets_anchors(self, model: ContactModel, gripper: GripperState) -> None:
        """Anchors persist for contacting nodes and are cleared for the rest."""
        velocity = np.tile([0.01, 0.0, 0.0], (4, 1))
        evaluation = model.evaluate(POINTS, velocity, gripper, 0.0, 0.0, 0.01)

        model.commit(evaluation, gripper)
        anchors = model.anchors()

        assert np.abs(anchors[PLATFORM][0]).max() > 0.0
        np.testing.assert_allclose(anchors[PLATFORM][2], 0.0)

        model.restore_anchors({body: np.zeros((4, 3)) for body in anchors})
        np.testing.assert_allclose(model.anchors()[PLATFORM], 0.0)

    def test_stiffness_triplets_are_consistent(self, model: ContactModel, gripper: GripperState) -> None:
        evaluation = model.evaluate(POINTS, np.zeros((4, 3)), gripper, 0.0, 0.0, 0.01)

        assert len(evaluation.rows) == len(evaluation.cols) == len(evaluation.vals) == 3 * 9

    def test_gross_slip_requires_every_loaded_contact_to_slip(self, model: ContactModel, gripper: GripperState) -> None:
        fast = np.tile([10.0, 0.0, 0.0], (4, 1))

        sliding = model.evaluate(POINTS, fast, gripper, 0.0, 0.0, 0.01)
        resting = model.evaluate(POINTS, np.zeros((4, 3)), gripper, 0.0, 0.0, 0.01)

        assert sliding.gross_slip(PLATFORM)
        assert not resting.gross_slip(PLATFORM)
        assert not resting.gross_slip(FINGER_1)
