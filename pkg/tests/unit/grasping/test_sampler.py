"""Tests for the antipodal grasp sampler."""

import math

import numpy as np
import pytest
from scipy import stats

from grasping.sampler import (
    grasp_frame,
    raycast,
    sample_antipodal,
    sample_from_settings,
    sample_surface_points,
    within_friction_cone,
)
from shared.config.settings import GripperSettings, SamplerSettings
from simulation.mesh import TetMesh
from simulation.primitives import ball_mesh


class TestRaycast:
    """Test cases for ray/triangle intersection."""

    TRIANGLES = np.array(
        [
            [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            [[0.0, 0.0, -1.0], [1.0, 0.0, -1.0], [0.0, 1.0, -1.0]],
        ]
    )

    def test_nearest_hit(self) -> None:
        hit, t = raycast(np.array([0.2, 0.2, 1.0]), np.array([0.0, 0.0, -1.0]), self.TRIANGLES, 1e-9)

        assert hit == 0
        assert t == pytest.approx(1.0)

    def test_hits_behind_t_min_are_skipped(self) -> None:
        hit, t = raycast(np.array([0.2, 0.2, 0.0]), np.array([0.0, 0.0, -1.0]), self.TRIANGLES, 1e-9)

        assert hit == 1
        assert t == pytest.approx(1.0)

    def test_miss(self) -> None:
        hit, t = raycast(np.array([2.0, 2.0, 1.0]), np.array([0.0, 0.0, -1.0]), self.TRIANGLES, 1e-9)

        assert hit == -1
        assert math.isinf(t)


class TestFrictionCone:
    """Test cases for the antipodal friction-cone check."""

    def test_inside_and_outside(self) -> None:
        axis = np.array([1.0, 0.0, 0.0])
        normal = np.array([1.0, 0.5, 0.0])  # atan(0.5) off the axis

        assert within_friction_cone(axis, normal, 0.5)
        assert not within_friction_cone(axis, normal, 0.4)

    def test_opposite_normal_is_outside(self) -> None:
        assert not within_friction_cone(np.array([1.0, 0.0, 0.0]), np.array([-1.0, 0.0, 0.0]), 10.0)


class TestGraspFrame:
    """Test cases for the gripper frame built from a squeeze axis."""

    @pytest.mark.parametrize("roll", [0.0, 1.0, 4.0])
    def test_frame_is_proper_rotation(self, roll: float) -> None:
        axis = np.array([0.3, -0.4, 0.8])

        frame = grasp_frame(axis, roll)

        np.testing.assert_allclose(frame.T @ frame, np.eye(3), atol=1e-12)
        assert np.linalg.det(frame) == pytest.approx(1.0)
        np.testing.assert_allclose(frame[:, 0], axis / np.linalg.norm(axis))


class TestSampleAntipodal:
    """Test cases for sample_antipodal."""

    def test_surface_points_lie_on_box_faces(self, small_box: TetMesh) -> None:
        samples = sample_surface_points(small_box, 50, np.random.default_rng(0))

        assert np.all(np.isclose(np.abs(samples.points).max(axis=1), 0.02))
        np.testing.assert_allclose(np.linalg.norm(samples.normals, axis=1), 1.0)

    def test_box_grasps_are_antipodal(self, small_box: TetMesh) -> None:
        """On a cube every grasp squeezes two opposite faces 4 cm apart."""
        gripper = GripperSettings()

        grasps = sample_antipodal(small_box, 5, 0.7, seed=0, gripper=gripper)

        assert [g.id for g in grasps] == list(range(5))
        for grasp in grasps:
            axis = grasp.squeeze_axis
            assert np.isclose(np.abs(axis).max(), 1.0)
            assert grasp.separation == pytest.approx(0.04 + 2.0 * gripper.clearance)

    def test_same_seed_same_grasps(self, small_box: TetMesh) -> None:
        first = sample_antipodal(small_box, 4, 0.7, seed=11)
        second = sample_antipodal(small_box, 4, 0.7, seed=11)

        assert [g.to_row() for g in first] == [g.to_row() for g in second]

    def test_surface_points_are_uniform_by_area(self, small_box: TetMesh) -> None:
        """Equal-area faces and equal cells of one face receive statistically equal counts."""
        samples = sample_surface_points(small_box, 6000, np.random.default_rng(5))

        dominant = np.argmax(np.abs(samples.normals), axis=1)
        face = 2 * dominant + (samples.normals[np.arange(len(dominant)), dominant] > 0.0)
        per_face = np.bincount(face, minlength=6)
        assert stats.chisquare(per_face).pvalue > 1e-3

        top = samples.points[face == 5]
        cells, _, _ = np.histogram2d(top[:, 0], top[:, 1], bins=4, range=[[-0.02, 0.02], [-0.02, 0.02]])
        assert stats.chisquare(cells.ravel()).pvalue > 1e-3

    def test_sphere_grasp_axes_pass_through_center(self) -> None:
        """Antipodal pairs on a ball lie on near-diameters, up to the facet size."""
        radius = 0.03
        ball = ball_mesh((radius, radius, radius), divisions=8)

        grasps = sample_antipodal(ball, 10, 0.7, seed=2)

        assert len(grasps) == 10
        for grasp in grasps:
            offset = np.linalg.norm(np.cross(np.asarray(grasp.position), grasp.squeeze_axis))
            assert offset < 0.3 * radius
            assert grasp.separation > 1.8 * radius

    def test_zero_count(self, small_box: TetMesh) -> None:
        assert sample_antipodal(small_box, 0, 0.7, seed=0) == []

    def test_object_wider_than_gripper_yields_shortfall(self, caplog: pytest.LogCaptureFixture) -> None:
        """A 20 cm ball cannot fit in an 8 cm gripper."""
        ball = ball_mesh((0.1, 0.1, 0.1), divisions=4)

        grasps = sample_antipodal(ball, 3, 0.7, seed=0, max_attempts_factor=5)

        assert grasps == []
        assert "found 0 of 3" in caplog.text

    def test_from_settings(self, small_box: TetMesh) -> None:
        sampler = SamplerSettings(Count=2, Seed=4)

        grasps = sample_from_settings(small_box, sampler, 0.7, GripperSettings(), 0.01)

        assert len(grasps) == 2
