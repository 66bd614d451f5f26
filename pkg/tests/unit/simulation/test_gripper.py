"""Tests for the gripper model and its force controller."""

import numpy as np
import pytest

from shared.config.settings import ControllerSettings
from shared.exceptions import ConfigurationError
from simulation.contact import FINGER_0, FINGER_1
from simulation.gripper import (
    ForceController,
    ForceFilter,
    GripperState,
    force_controller,
    lowpass_update,
    target_force,
)

IDENTITY_QUATERNION = np.array([0.0, 0.0, 0.0, 1.0])


class TestTargetForce:
    """Test cases for the minimum pickup force."""

    def test_cube_of_64_grams(self) -> None:
        """1.3 * 0.064 kg * 9.81 / 0.7 is about 1.166 N."""
        assert target_force(0.064, 0.7, 9.81) == pytest.approx(1.166, abs=1e-3)

    def test_scales_inversely_with_friction(self) -> None:
        assert target_force(1.0, 0.5) == pytest.approx(2.0 * target_force(1.0, 1.0))

    def test_massless_object_needs_no_force(self) -> None:
        assert target_force(0.0, 0.5) == 0.0

    @pytest.mark.parametrize(("mass", "mu"), [(1.0, 0.0), (-0.1, 0.5), (1.0, -0.1)])
    def test_invalid_inputs_raise(self, mass: float, mu: float) -> None:
        with pytest.raises(ConfigurationError):
            target_force(mass, mu)


class TestForceFilter:
    """Test cases for the low-pass force filter."""

    def test_lowpass_update(self) -> None:
        assert lowpass_update(1.0, 3.0, 0.25) == pytest.approx(1.5)

    def test_filter_converges_to_constant_input(self) -> None:
        force_filter = ForceFilter(alpha=0.5)

        for _ in range(60):
            force_filter.update((2.0, 4.0))

        assert force_filter.values == pytest.approx([2.0, 4.0])
        assert force_filter.mean == pytest.approx(3.0)

    def test_alternating_input_is_attenuated(self) -> None:
        """A +-1 square wave at the step rate settles to amplitude alpha / (2 - alpha)."""
        alpha = 0.05
        value = 0.0
        history = []
        for k in range(600):
            value = lowpass_update(value, 1.0 if k % 2 == 0 else -1.0, alpha)
            history.append(value)

        amplitude = alpha / (2.0 - alpha)
        assert history[-2] == pytest.approx(amplitude, rel=1e-6)
        assert history[-1] == pytest.approx(-amplitude, rel=1e-6)
        assert max(abs(v) for v in history[-100:]) <= amplitude * (1.0 + 1e-6)


class TestForceController:
    """Test cases for the PI grasp-force controller."""

    def test_proportional_and_integral_terms(self) -> None:
        drive, integral = force_controller(1.0, 2.0, 0.0, kp=3.0, ki=10.0, max_force=100.0, dt=0.01)

        assert integral == pytest.approx(0.1)
        assert drive == pytest.approx(3.1)

    def test_output_is_clamped_and_integral_frozen(self) -> None:
        """Saturation in the direction of the error stops integration."""
        drive, integral = force_controller(0.0, 10.0, 5.0, kp=1.0, ki=10.0, max_force=8.0, dt=0.01)

        assert drive == pytest.approx(8.0)
        assert integral == pytest.approx(5.0)

    def test_output_is_never_negative(self) -> None:
        drive, integral = force_controller(10.0, 1.0, 0.0, kp=1.0, ki=10.0, max_force=8.0, dt=0.01)

        assert drive == 0.0
        assert integral == 0.0

    def test_stateful_controller_accumulates(self) -> None:
        controller = ForceController(kp=0.0, ki=1.0, max_force=10.0)

        controller.update(0.0, 1.0, 0.5)
        drive = controller.update(0.0, 1.0, 0.5)

        assert drive == pytest.approx(1.0)
        assert controller.integral == pytest.approx(1.0)

    def test_step_response_settles_in_band(self) -> None:
        """Quasi-static pads whose raw force equals the drive: the filtered force enters the band and stays."""
        settings = ControllerSettings()
        controller = ForceController(
            kp=settings.proportional_gain, ki=settings.integral_gain, max_force=settings.max_force
        )
        force_filter = ForceFilter(alpha=settings.filter_alpha)
        dt = 0.002
        target = 10.0

        history = []
        for _ in range(int(round(settings.time_budget / dt))):
            drive = controller.update(force_filter.mean, target, dt)
            assert 0.0 <= drive <= settings.max_force
            force_filter.update((drive, drive))
            history.append(force_filter.mean)

        window = int(round(settings.convergence_window / dt))
        errors = np.abs(np.array(history[-window:]) - target)
        assert np.all(errors <= settings.convergence_band * target)
        assert history[-1] == pytest.approx(target, rel=1e-3)


class TestGripperState:
    """Test cases for gripper geometry."""

    def test_identity_pose_axes(self) -> None:
        gripper = GripperState.from_pose(np.zeros(3), IDENTITY_QUATERNION, 0.04)

        np.testing.assert_allclose(gripper.squeeze_axis, [1.0, 0.0, 0.0])
        np.testing.assert_allclose(gripper.width_axis, [0.0, 1.0, 0.0])
        np.testing.assert_allclose(gripper.approach_axis, [0.0, 0.0, 1.0])
        np.testing.assert_allclose(gripper.quaternion, IDENTITY_QUATERNION, atol=1e-12)

    def test_pads_face_each_other(self) -> None:
        gripper = GripperState.from_pose(np.array([1.0, 0.0, 0.0]), IDENTITY_QUATERNION, 0.04)

        np.testing.assert_allclose(gripper.pad_center(FINGER_0), [0.98, 0.0, 0.0])
        np.testing.assert_allclose(gripper.pad_center(FINGER_1), [1.02, 0.0, 0.0])
        np.testing.assert_allclose(gripper.finger_normal(FINGER_0), -gripper.finger_normal(FINGER_1))

        pad_0, pad_1 = gripper.pads(thickness=0.01)
        assert pad_0.body == FINGER_0
        assert pad_1.half_length == pytest.approx(0.02)

    def test_separation_is_limited_by_travel(self) -> None:
        gripper = GripperState.from_pose(np.zeros(3), IDENTITY_QUATERNION, 0.5, max_half_travel=0.04)

        assert gripper.separation == pytest.approx(0.08)
        assert gripper.max_separation == pytest.approx(0.08)

    def test_negative_separation_is_rejected(self) -> None:
        with pytest.raises(ValueError):
            GripperState(position=np.zeros(3), rotation=np.eye(3), separation=-0.01)

    def test_point_velocity_of_rotating_gripper(self) -> None:
        gripper = GripperState.from_pose(np.zeros(3), IDENTITY_QUATERNION, 0.04).moved(
            np.zeros(3), np.eye(3), np.array([0.1, 0.0, 0.0]), np.array([0.0, 0.0, 1.0])
        )

        velocity = gripper.point_velocity(np.array([[1.0, 0.0, 0.0]]))

        np.testing.assert_allclose(velocity, [[0.1, 1.0, 0.0]])
