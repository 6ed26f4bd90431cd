import math

import numpy as np
import pytest

from boxmetrics import (
    OracleConfig,
    OrientedBox,
    brute_segment_distance,
    mc_iou,
    random_box,
    sampled_v2v,
    v2v,
)
from boxmetrics.oracles import (
    RANDOM_CENTER_BOUND,
    RANDOM_DIM_RANGE,
    random_box_pair,
    surface_cell_diagonal,
    surface_lattice,
)
from conftest import unit_cube_at


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            OracleConfig(sample_count=0)
        with pytest.raises(ValueError):
            OracleConfig(grid_res=1)
        with pytest.raises(ValueError):
            OracleConfig(seed=-1)
        with pytest.raises(ValueError):
            OracleConfig(seed=2**64)


class TestMonteCarloIoU:
    def test_identical_boxes_exact_one(self, unit_box):
        for seed in (0, 1, 99):
            est, err = mc_iou(unit_box, unit_cube_at(0.0), OracleConfig(10_000, seed))
            assert est == 1.0
            assert err == 0.0

    def test_disjoint_exact_zero(self, unit_box):
        est, err = mc_iou(unit_box, unit_cube_at(10.0), OracleConfig(10_000, 3))
        assert est == 0.0
        assert err == 0.0

    def test_half_shifted_converges(self, unit_box):
        est, err = mc_iou(unit_box, unit_cube_at(0.5), OracleConfig(1_000_000, 11))
        assert est == pytest.approx(1 / 3, abs=0.002)
        assert 0.0 < err < 0.002

    def test_deterministic_given_seed(self, unit_box):
        a, b = unit_box, unit_cube_at(0.5)
        cfg = OracleConfig(50_000, seed=1234)
        assert mc_iou(a, b, cfg) == mc_iou(a, b, cfg)
        other = mc_iou(a, b, OracleConfig(50_000, seed=1235))
        assert other != mc_iou(a, b, cfg)


class TestSampledV2V:
    def test_facing_cubes_exact(self, unit_box):
        for grid in (2, 5, 8, 33):
            value = sampled_v2v(unit_box, unit_cube_at(10.0), OracleConfig(1, 0, grid))
            assert value == pytest.approx(9.0, abs=1e-12)

    def test_identical_boxes_zero(self, unit_box):
        assert sampled_v2v(unit_box, unit_cube_at(0.0), OracleConfig(1, 0, 4)) == 0.0

    def test_corner_case_exact(self, unit_box):
        value = sampled_v2v(unit_box, unit_cube_at(2.0, 2.0, 2.0), OracleConfig(1, 0, 8))
        assert value == pytest.approx(math.sqrt(3), abs=1e-12)

    def test_lattice_shape_and_surface(self):
        rng = np.random.default_rng(61)
        box = random_box(rng)
        pts = surface_lattice(box, 6)
        assert pts.shape == (6 * 36, 3)
        unit = np.abs(((pts - box.center) @ box.rotation) / box.dimensions)
        assert np.all(unit.max(axis=1) >= 0.5 - 1e-12)
        assert np.all(unit <= 0.5 + 1e-12)

    def test_gap_shrinks_as_grid_doubles(self):
        rng = np.random.default_rng(62)
        gaps = {8: [], 16: [], 32: []}
        checked = 0
        while checked < 50:
            a, b = random_box_pair(rng)
            exact = v2v(a, b)
            if exact == 0.0:
                continue
            checked += 1
            for grid in gaps:
                gaps[grid].append(sampled_v2v(a, b, OracleConfig(1, 0, grid)) - exact)
        mean8 = np.mean(gaps[8])
        mean16 = np.mean(gaps[16])
        mean32 = np.mean(gaps[32])
        assert mean8 >= mean16 >= mean32 >= 0.0

    def test_cell_diagonal(self):
        box = OrientedBox([0, 0, 0], np.eye(3), [1.0, 2.0, 3.0])
        # widest face spans the 2 x 3 extents
        assert surface_cell_diagonal(box, 2) == pytest.approx(math.hypot(2.0, 3.0))


class TestBruteSegmentDistance:
    def test_crossing_perpendicular(self):
        d = brute_segment_distance([(-1, 0, 0), (1, 0, 0)], [(0, -1, 1), (0, 1, 1)], steps=101)
        assert d == pytest.approx(1.0, abs=1e-12)

    def test_identical_segments(self):
        d = brute_segment_distance([(0, 0, 0), (1, 1, 1)], [(0, 0, 0), (1, 1, 1)], steps=17)
        assert d == 0.0

    def test_parallel_offset(self):
        d = brute_segment_distance([(0, 0, 0), (1, 0, 0)], [(0, 1, 0), (1, 1, 0)], steps=33)
        assert d == pytest.approx(1.0, abs=1e-12)

    def test_rejects_tiny_grids(self):
        with pytest.raises(ValueError):
            brute_segment_distance([(0, 0, 0), (1, 0, 0)], [(0, 1, 0), (1, 1, 0)], steps=1)


class TestRandomBoxes:
    def test_population_ranges(self):
        rng = np.random.default_rng(63)
        for _ in range(200):
            box = random_box(rng)
            assert np.all(np.abs(box.center) <= RANDOM_CENTER_BOUND)
            assert np.all(box.dimensions >= RANDOM_DIM_RANGE[0])
            assert np.all(box.dimensions <= RANDOM_DIM_RANGE[1])
            r = box.rotation
            assert np.abs(r.T @ r - np.eye(3)).max() <= 1e-12

    def test_deterministic_stream(self):
        a1 = random_box(np.random.default_rng(42))
        a2 = random_box(np.random.default_rng(42))
        np.testing.assert_array_equal(a1.center, a2.center)
        np.testing.assert_array_equal(a1.rotation, a2.rotation)
        np.testing.assert_array_equal(a1.dimensions, a2.dimensions)
