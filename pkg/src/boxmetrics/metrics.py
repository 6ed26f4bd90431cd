"""Box-pair comparison metrics: disparity score plus the auxiliary set."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .distance import _min_surface_distance, v2v
from .geometry import (
    DEFAULT_TOL,
    GimbalLockWarning,
    OrientedBox,
    contains_point,
    euler_xyz_from_rotation,
    quaternion_from_rotation,
    wrap_angle,
)
from .intersection import intersection_volume, iou

__all__ = [
    "PointCloud",
    "MetricReport",
    "UndefinedPointRatioError",
    "WARN_GIMBAL_LOCK",
    "WARN_UNDEFINED_POINT_RATIO",
    "bbd",
    "position_difference",
    "size_difference",
    "quaternion_distance",
    "matrix_geodesic_distance",
    "euler_angle_difference",
    "point_based_iou",
    "full_report",
]

WARN_GIMBAL_LOCK = "gimbal_lock"
WARN_UNDEFINED_POINT_RATIO = "undefined_point_ratio"


class UndefinedPointRatioError(ValueError):
    """No cloud point lies in either box; the point ratio has no value."""


@dataclass(frozen=True)
class PointCloud:
    """A bag of world-space points."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 3)
        if not np.all(np.isfinite(pts)):
            raise ValueError("point cloud coordinates must be finite")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class MetricReport:
    """Every pairwise metric for one box pair."""

    iou: float
    v2v: float
    bbd: float
    position_diff_abs: float
    position_diff_squared: float
    size_diff_abs: float
    size_diff_squared: float
    euler_diff: np.ndarray
    quaternion_distance: float
    matrix_geodesic: float
    point_iou: float | None
    warnings: tuple[str, ...]


def bbd(box_a: OrientedBox, box_b: OrientedBox, tol: float = DEFAULT_TOL) -> float:
    """Disparity score 1 - iou + v2v: zero only for hull-identical boxes."""
    i, v = _iou_and_v2v(box_a, box_b, tol)
    return 1.0 - i + v


def _iou_and_v2v(box_a: OrientedBox, box_b: OrientedBox, tol: float) -> tuple[float, float]:
    # one intersection-volume evaluation feeds both metrics
    inter = intersection_volume(box_a, box_b, tol)
    union = box_a.volume + box_b.volume - inter
    i = min(max(inter / union, 0.0), 1.0)
    v = 0.0 if inter > 0.0 else _min_surface_distance(box_a, box_b, tol)
    return i, v


def position_difference(box_a: OrientedBox, box_b: OrientedBox) -> tuple[float, float]:
    """(L2 distance, squared L2 distance) between the centers."""
    delta = box_a.center - box_b.center
    sq = float(delta @ delta)
    return math.sqrt(sq), sq


def size_difference(box_a: OrientedBox, box_b: OrientedBox) -> tuple[float, float]:
    """(sum of absolute, sum of squared) per-axis extent differences."""
    delta = box_a.dimensions - box_b.dimensions
    return float(np.abs(delta).sum()), float(delta @ delta)


def quaternion_distance(box_a: OrientedBox, box_b: OrientedBox) -> float:
    """Geodesic angle between the rotations via quaternions; sign-insensitive."""
    qa = quaternion_from_rotation(box_a.rotation)
    qb = quaternion_from_rotation(box_b.rotation)
    return 2.0 * math.acos(min(1.0, abs(float(qa @ qb))))


def matrix_geodesic_distance(box_a: OrientedBox, box_b: OrientedBox) -> float:
    """Geodesic angle between the rotations via the relative-rotation trace."""
    trace = float(np.trace(box_a.rotation.T @ box_b.rotation))
    return math.acos(min(1.0, max(-1.0, (trace - 1.0) / 2.0)))


def euler_angle_difference(box_a: OrientedBox, box_b: OrientedBox) -> np.ndarray:
    """Per-axis wrapped angular change from box A's pose to box B's.

    Intrinsic X-Y-Z decompositions; each component lies in (-pi, pi]. Warns
    with GimbalLockWarning when either decomposition is non-unique.
    """
    ea = euler_xyz_from_rotation(box_a.rotation)
    eb = euler_xyz_from_rotation(box_b.rotation)
    return np.array([wrap_angle(x) for x in eb - ea])


def point_based_iou(
    cloud: PointCloud, box_a: OrientedBox, box_b: OrientedBox, tol: float = DEFAULT_TOL
) -> float:
    """Ratio of cloud points inside both boxes to points inside either.

    Boundary points count as inside. Raises UndefinedPointRatioError when no
    point lies in either box rather than silently reporting 0.
    """
    if len(cloud) == 0:
        raise UndefinedPointRatioError("empty point cloud")
    in_a = contains_point(box_a, cloud.points, tol)
    in_b = contains_point(box_b, cloud.points, tol)
    union = int(np.count_nonzero(in_a | in_b))
    if union == 0:
        raise UndefinedPointRatioError("no point lies in either box")
    return int(np.count_nonzero(in_a & in_b)) / union


def full_report(
    box_a: OrientedBox,
    box_b: OrientedBox,
    cloud: PointCloud | None = None,
    tol: float = DEFAULT_TOL,
) -> MetricReport:
    """Compute every metric for one pair; soft failures become warning flags."""
    flags: list[str] = []
    i, v = _iou_and_v2v(box_a, box_b, tol)
    pos_abs, pos_sq = position_difference(box_a, box_b)
    size_abs, size_sq = size_difference(box_a, box_b)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        euler = euler_angle_difference(box_a, box_b)
    if any(issubclass(w.category, GimbalLockWarning) for w in caught):
        flags.append(WARN_GIMBAL_LOCK)

    point_iou = None
    if cloud is not None:
        try:
            point_iou = point_based_iou(cloud, box_a, box_b, tol)
        except UndefinedPointRatioError:
            flags.append(WARN_UNDEFINED_POINT_RATIO)

    return MetricReport(
        iou=i,
        v2v=v,
        bbd=1.0 - i + v,
        position_diff_abs=pos_abs,
        position_diff_squared=pos_sq,
        size_diff_abs=size_abs,
        size_diff_squared=size_sq,
        euler_diff=euler,
        quaternion_distance=quaternion_distance(box_a, box_b),
        matrix_geodesic=matrix_geodesic_distance(box_a, box_b),
        point_iou=point_iou,
        warnings=tuple(flags),
    )
