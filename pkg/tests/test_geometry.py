import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxmetrics import OrientedBox, box_corners, box_to_transform, contains_point, world_to_unit
from boxmetrics.geometry import (
    CUBOID,
    EDGES,
    FACE_NORMAL_AXES,
    FACE_NORMAL_SIGNS,
    FACES,
    UNIT_CORNERS,
    GimbalLockWarning,
    euler_xyz_from_rotation,
    quaternion_from_rotation,
    rotation_from_euler_xyz,
    rotation_from_quaternion,
    rot_z,
    transform_inverse,
    unit_to_world,
    wrap_angle,
)
from boxmetrics.oracles import random_box, random_rotation

SQ2 = math.sqrt(2.0)


class TestTopologyTables:
    def test_unit_corner_coordinates(self):
        assert np.all(np.abs(UNIT_CORNERS) == 0.5)
        # all 8 sign combinations appear exactly once
        assert len({tuple(row) for row in UNIT_CORNERS.tolist()}) == 8

    def test_edges_join_adjacent_corners(self):
        assert len(EDGES) == 12
        for a, b in EDGES:
            diff = UNIT_CORNERS[a] != UNIT_CORNERS[b]
            assert diff.sum() == 1

    def test_faces_span_axis_planes_with_outward_normals(self):
        assert len(FACES) == 6
        for k, tri in enumerate(FACES):
            axis = FACE_NORMAL_AXES[k]
            sign = FACE_NORMAL_SIGNS[k]
            coords = UNIT_CORNERS[list(tri), axis]
            # all three corners on the same axis plane, on the normal's side
            assert np.all(coords == coords[0])
            assert coords[0] == 0.5 * sign
            # spans cover the two remaining axes
            span = UNIT_CORNERS[list(tri[1:])] - UNIT_CORNERS[tri[0]]
            assert np.linalg.matrix_rank(span) == 2
            assert np.all(span[:, axis] == 0.0)

    def test_topology_singleton_matches_module_tables(self):
        assert CUBOID.unit_corners is UNIT_CORNERS
        assert CUBOID.edges == EDGES
        assert CUBOID.faces == FACES


class TestConstruction:
    def test_rejects_nonpositive_dimensions(self):
        with pytest.raises(ValueError):
            OrientedBox([0, 0, 0], np.eye(3), [0.0, 1.0, 1.0])
        with pytest.raises(ValueError):
            OrientedBox([0, 0, 0], np.eye(3), [1.0, -2.0, 1.0])

    def test_rejects_far_from_orthonormal(self):
        bad = np.eye(3)
        bad[0, 1] = 1e-3
        with pytest.raises(ValueError):
            OrientedBox([0, 0, 0], bad, [1, 1, 1])

    def test_rejects_reflection(self):
        with pytest.raises(ValueError):
            OrientedBox([0, 0, 0], np.diag([1.0, 1.0, -1.0]), [1, 1, 1])

    def test_reprojects_small_drift(self):
        noisy = rot_z(0.3) + 5e-8
        box = OrientedBox([0, 0, 0], noisy, [1, 1, 1])
        r = box.rotation
        assert np.abs(r.T @ r - np.eye(3)).max() <= 1e-9
        assert abs(np.linalg.det(r) - 1.0) <= 1e-9

    def test_rotation_input_formats_agree(self):
        angle = 0.7
        by_matrix = OrientedBox([1, 2, 3], rot_z(angle), [2, 1, 3])
        by_quat = OrientedBox.from_quaternion(
            [1, 2, 3], [math.cos(angle / 2), 0, 0, math.sin(angle / 2)], [2, 1, 3]
        )
        by_euler = OrientedBox.from_euler_xyz([1, 2, 3], [0, 0, angle], [2, 1, 3])
        np.testing.assert_allclose(by_quat.rotation, by_matrix.rotation, atol=1e-12)
        np.testing.assert_allclose(by_euler.rotation, by_matrix.rotation, atol=1e-12)

    def test_volume(self):
        assert OrientedBox([0, 0, 0], np.eye(3), [2, 3, 4]).volume == 24.0


class TestTransforms:
    def test_identity_box_gives_identity_transform(self, unit_box):
        np.testing.assert_array_equal(box_to_transform(unit_box), np.eye(4))

    def test_pure_scaling_block(self):
        box = OrientedBox([0, 0, 0], np.eye(3), [2, 1, 1])
        np.testing.assert_array_equal(box_to_transform(box), np.diag([2.0, 1, 1, 1]))

    def test_rotated_translated_transform_places_corners(self):
        r = rot_z(math.pi / 2)
        box = OrientedBox([1, 2, 3], r, [1, 1, 1])
        t = box_to_transform(box)
        np.testing.assert_allclose(t[:3, :3], r, atol=1e-15)
        np.testing.assert_array_equal(t[:3, 3], [1, 2, 3])
        np.testing.assert_array_equal(t[3], [0, 0, 0, 1])
        # corners land at R u + p, checked by direct multiplication
        homo = np.hstack([UNIT_CORNERS, np.ones((8, 1))])
        expected = (t @ homo.T).T[:, :3]
        np.testing.assert_allclose(box_corners(box), expected, atol=1e-12)

    def test_transform_inverse_round_trip(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            box = random_box(rng)
            t = box_to_transform(box)
            np.testing.assert_allclose(t @ transform_inverse(box), np.eye(4), atol=1e-9)

    def test_corner_order_matches_unit_table(self, unit_box):
        np.testing.assert_array_equal(box_corners(unit_box), UNIT_CORNERS)

    def test_uniform_scale_corners(self):
        box = OrientedBox([0, 0, 0], np.eye(3), [2, 2, 2])
        np.testing.assert_array_equal(box_corners(box), 2.0 * UNIT_CORNERS)

    def test_rot45_first_corner(self):
        box = OrientedBox([0, 0, 0], rot_z(math.pi / 4), [1, 1, 1])
        np.testing.assert_allclose(box_corners(box)[0], [0.0, -SQ2 / 2, -0.5], atol=1e-12)

    def test_world_to_unit_center(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            box = random_box(rng)
            np.testing.assert_allclose(world_to_unit(box, box.center), np.zeros(3), atol=1e-12)

    def test_world_to_unit_scales_by_dimension(self):
        box = OrientedBox([0, 0, 0], np.eye(3), [2, 1, 1])
        np.testing.assert_allclose(world_to_unit(box, [1, 0, 0]), [0.5, 0, 0], atol=1e-15)

    def test_round_trip_1000_random_boxes(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            box = random_box(rng)
            point = rng.uniform(-5, 5, 3)
            back = unit_to_world(box, world_to_unit(box, point))
            limit = 1e-9 * max(1.0, float(np.linalg.norm(point)))
            assert np.linalg.norm(back - point) <= limit


class TestContainment:
    def test_interior_boundary_outside(self, unit_box):
        assert contains_point(unit_box, [0, 0, 0], 1e-9)
        assert contains_point(unit_box, [0.5, 0, 0], 1e-9)
        assert not contains_point(unit_box, [0.5 + 1e-6, 0, 0], 1e-9)

    def test_corners_contained(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            box = random_box(rng)
            assert np.all(contains_point(box, box.corners, 1e-9))

    def test_rigid_equivariance(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            box = random_box(rng)
            point = rng.uniform(-3, 3, 3)
            q = random_rotation(rng)
            t = rng.uniform(-5, 5, 3)
            moved = OrientedBox(q @ box.center + t, q @ box.rotation, box.dimensions)
            assert contains_point(box, point) == contains_point(moved, q @ point + t)

    def test_batched_matches_scalar(self, unit_box):
        pts = np.array([[0, 0, 0], [0.6, 0, 0], [0.5, 0.5, 0.5]])
        batched = contains_point(unit_box, pts)
        assert batched.tolist() == [contains_point(unit_box, p) for p in pts]


class TestRotationConversions:
    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_quaternion_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        r = random_rotation(rng)
        back = rotation_from_quaternion(quaternion_from_rotation(r))
        assert np.abs(back - r).max() <= 1e-12

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_euler_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        r = random_rotation(rng)
        if abs(abs(math.asin(np.clip(r[0, 2], -1, 1))) - math.pi / 2) < 1e-5:
            return  # decomposition non-unique near gimbal lock
        angles = euler_xyz_from_rotation(r)
        back = rotation_from_euler_xyz(angles)
        assert np.abs(back - r).max() <= 1e-9

    def test_euler_of_rot_z(self):
        np.testing.assert_allclose(
            euler_xyz_from_rotation(rot_z(math.pi / 2)), [0, 0, math.pi / 2], atol=1e-12
        )

    def test_gimbal_lock_warns(self):
        r = rotation_from_euler_xyz([0.3, math.pi / 2, 0.0])
        with pytest.warns(GimbalLockWarning):
            euler_xyz_from_rotation(r)

    @given(st.floats(-50.0, 50.0))
    def test_wrap_angle_range_and_congruence(self, angle):
        w = wrap_angle(angle)
        assert -math.pi < w <= math.pi
        assert math.isclose(math.sin(w), math.sin(angle), abs_tol=1e-9)
        assert math.isclose(math.cos(w), math.cos(angle), abs_tol=1e-9)
