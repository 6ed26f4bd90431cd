"""Slow independent references for differential testing.

All randomness comes from numpy's PCG64 generator with explicit seeds, so
every oracle number is reproducible from its configuration alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .geometry import (
    FACE_NORMAL_AXES,
    FACE_NORMAL_SIGNS,
    OrientedBox,
    contains_point,
    rotation_from_quaternion,
)

__all__ = [
    "OracleConfig",
    "mc_iou",
    "sampled_v2v",
    "surface_lattice",
    "surface_cell_diagonal",
    "brute_segment_distance",
    "random_rotation",
    "random_box",
    "random_box_pair",
]

# Random-box population used throughout the differential suites.
RANDOM_CENTER_BOUND = 2.0
RANDOM_DIM_RANGE = (0.2, 2.0)


@dataclass(frozen=True)
class OracleConfig:
    """Sampling budget and seed for the oracle estimators."""

    sample_count: int = 1_000_000
    seed: int = 0
    grid_res: int = 32

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if self.grid_res < 2:
            raise ValueError("grid_res must be >= 2")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


def mc_iou(box_a: OrientedBox, box_b: OrientedBox, cfg: OracleConfig) -> tuple[float, float]:
    """Monte-Carlo IoU estimate and its standard error.

    Samples uniformly inside box A, counts the fraction landing in box B,
    and propagates the binomial error through the IoU ratio.
    """
    rng = np.random.default_rng(cfg.seed)
    unit = rng.random((cfg.sample_count, 3)) - 0.5
    world = (unit * box_a.dimensions) @ box_a.rotation.T + box_a.center
    fraction = float(np.count_nonzero(contains_point(box_b, world, 0.0))) / cfg.sample_count

    vol_a = box_a.volume
    vol_b = box_b.volume
    inter = fraction * vol_a
    estimate = inter / (vol_a + vol_b - inter)
    sigma_f = math.sqrt(fraction * (1.0 - fraction) / cfg.sample_count)
    derivative = vol_a * (vol_a + vol_b) / (vol_a + vol_b - inter) ** 2
    return estimate, derivative * sigma_f


def surface_lattice(box: OrientedBox, grid_res: int) -> np.ndarray:
    """grid_res x grid_res lattice on each face, corners included; (6 g^2, 3)."""
    half = 0.5 * box.dimensions
    faces = []
    for k in range(6):
        axis = FACE_NORMAL_AXES[k]
        j1, j2 = (j for j in range(3) if j != axis)
        u = np.linspace(-half[j1], half[j1], grid_res)
        v = np.linspace(-half[j2], half[j2], grid_res)
        uu, vv = np.meshgrid(u, v, indexing="ij")
        body = np.empty((grid_res * grid_res, 3))
        body[:, axis] = FACE_NORMAL_SIGNS[k] * half[axis]
        body[:, j1] = uu.ravel()
        body[:, j2] = vv.ravel()
        faces.append(body)
    return np.concatenate(faces, axis=0) @ box.rotation.T + box.center


def surface_cell_diagonal(box: OrientedBox, grid_res: int) -> float:
    """Diagonal of the largest lattice cell across the six faces."""
    d = box.dimensions
    best = 0.0
    for axis in range(3):
        j1, j2 = (j for j in range(3) if j != axis)
        best = max(best, math.hypot(d[j1], d[j2]) / (grid_res - 1))
    return best


def sampled_v2v(box_a: OrientedBox, box_b: OrientedBox, cfg: OracleConfig) -> float:
    """Minimum distance between dense surface lattices of the two boxes.

    An upper bound of the exact surface distance; returns 0 when a lattice
    point of one box lies inside the other (overlapping input).
    """
    pts_a = surface_lattice(box_a, cfg.grid_res)
    pts_b = surface_lattice(box_b, cfg.grid_res)
    if np.any(contains_point(box_b, pts_a)) or np.any(contains_point(box_a, pts_b)):
        return 0.0
    dist, _ = cKDTree(pts_b).query(pts_a, k=1)
    return float(dist.min())


def brute_segment_distance(seg_a, seg_b, steps: int) -> float:
    """Minimum distance over a steps x steps parameter grid of two segments."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    a = np.asarray(seg_a, dtype=float).reshape(2, 3)
    b = np.asarray(seg_b, dtype=float).reshape(2, 3)
    t = np.linspace(0.0, 1.0, steps)
    pa = a[0] + t[:, None] * (a[1] - a[0])
    pb = b[0] + t[:, None] * (b[1] - b[0])
    diff = pa[:, None, :] - pb[None, :, :]
    return float(np.sqrt((diff * diff).sum(axis=-1).min()))


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform rotation from a normalized 4D Gaussian quaternion."""
    q = rng.normal(size=4)
    return rotation_from_quaternion(q)


def random_box(rng: np.random.Generator) -> OrientedBox:
    """One box from the differential-test population."""
    lo, hi = RANDOM_DIM_RANGE
    return OrientedBox(
        center=rng.uniform(-RANDOM_CENTER_BOUND, RANDOM_CENTER_BOUND, 3),
        rotation=random_rotation(rng),
        dimensions=rng.uniform(lo, hi, 3),
    )


def random_box_pair(rng: np.random.Generator) -> tuple[OrientedBox, OrientedBox]:
    return random_box(rng), random_box(rng)
