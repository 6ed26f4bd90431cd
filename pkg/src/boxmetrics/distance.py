"""Exact surface-to-surface distance between two oriented boxes.

The minimum over six families of candidate point pairs (corner/face,
corner/edge, edge/edge, corner/corner projections) realizes the shortest
distance for disjoint boxes; overlapping boxes short-circuit to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import (
    DEFAULT_TOL,
    EDGE_ENDS,
    EDGE_STARTS,
    FACES,
    FACE_NORMAL_AXES,
    FACE_NORMAL_SIGNS,
    OrientedBox,
)
from .intersection import intersection_volume

__all__ = [
    "PairKind",
    "PointPair",
    "project_point_onto_face",
    "project_point_onto_edge",
    "closest_points_between_edges",
    "enumerate_ppois",
    "v2v",
]

# Gram determinants below this relative threshold mean parallel segments;
# those minima are already covered by the corner/edge and corner/corner cases.
PARALLEL_REL = 1e-12

# Axis indices of the two in-plane directions for each face.
_FACE_SPAN_AXES = tuple(
    tuple(j for j in range(3) if j != axis) for axis in FACE_NORMAL_AXES
)


class PairKind(Enum):
    CORNER_A_FACE_B = "corner_a_face_b"
    CORNER_B_FACE_A = "corner_b_face_a"
    CORNER_A_EDGE_B = "corner_a_edge_b"
    CORNER_B_EDGE_A = "corner_b_edge_a"
    EDGE_A_EDGE_B = "edge_a_edge_b"
    CORNER_A_CORNER_B = "corner_a_corner_b"


@dataclass(frozen=True)
class PointPair:
    """A candidate closest pair: one point on each box hull."""

    point_a: np.ndarray
    point_b: np.ndarray
    distance: float
    kind: PairKind
    index_a: int
    index_b: int


def project_point_onto_face(point, box: OrientedBox, face_index: int, tol: float = DEFAULT_TOL):
    """Orthogonal projection of a point onto one box face.

    Returns (distance, projected point) when the projection lands within the
    face rectangle (span parameters in [0, 1] up to tol), else None. The
    projection subtracts the normal component, which keeps it on the plane.
    """
    p = np.asarray(point, dtype=float).reshape(3)
    corners = box.corners
    tri = FACES[face_index]
    origin = corners[tri[0]]
    span = np.stack([corners[tri[1]] - origin, corners[tri[2]] - origin], axis=1)
    normal = FACE_NORMAL_SIGNS[face_index] * box.rotation[:, FACE_NORMAL_AXES[face_index]]

    v = p - origin
    d = float(normal @ v)
    projection = p - normal * d
    params = np.linalg.solve(span.T @ span, span.T @ v)
    if np.all(params >= -tol) and np.all(params <= 1.0 + tol):
        return abs(d), projection
    return None


def project_point_onto_edge(point, box: OrientedBox, edge_index: int, tol: float = DEFAULT_TOL):
    """Projection of a point onto one box edge; None when it falls off the segment."""
    p = np.asarray(point, dtype=float).reshape(3)
    corners = box.corners
    start = corners[EDGE_STARTS[edge_index]]
    slope = corners[EDGE_ENDS[edge_index]] - start
    t = float((p - start) @ slope) / float(slope @ slope)
    if -tol <= t <= 1.0 + tol:
        return t, start + t * slope
    return None


def closest_points_between_edges(edge_a, edge_b, tol: float = DEFAULT_TOL):
    """Closest points of two segments from the least-squares normal equations.

    Returns (t_a, t_b, point_a, point_b), or None for (near-)parallel
    segments or when either parameter leaves [0, 1] (up to tol). The
    denominator is the Gram determinant |ma|^2 |mb|^2 - (ma.mb)^2.
    """
    a = np.asarray(edge_a, dtype=float).reshape(2, 3)
    b = np.asarray(edge_b, dtype=float).reshape(2, 3)
    ma = a[1] - a[0]
    mb = b[1] - b[0]
    asq = float(ma @ ma)
    bsq = float(mb @ mb)
    cross = float(ma @ mb)
    gram = asq * bsq - cross * cross
    if abs(gram) <= PARALLEL_REL * asq * bsq:
        return None
    d = a[0] - b[0]
    mad = float(ma @ d)
    mbd = float(mb @ d)
    t_a = (cross * mbd - bsq * mad) / gram
    t_b = (asq * mbd - cross * mad) / gram
    if not (-tol <= t_a <= 1.0 + tol and -tol <= t_b <= 1.0 + tol):
        return None
    return t_a, t_b, a[0] + t_a * ma, b[0] + t_b * mb


def _corner_face_case(corner_box: OrientedBox, face_box: OrientedBox, tol: float):
    """Valid corner-onto-face projections, computed in the face box's body frame."""
    body = (corner_box.corners - face_box.center) @ face_box.rotation
    half = 0.5 * face_box.dimensions
    slack = (0.5 + tol) * face_box.dimensions

    axes = np.array(FACE_NORMAL_AXES)
    planes = np.array(FACE_NORMAL_SIGNS) * half[axes]
    span1 = np.array([s[0] for s in _FACE_SPAN_AXES])
    span2 = np.array([s[1] for s in _FACE_SPAN_AXES])
    valid = (np.abs(body[:, span1]) <= slack[span1]) & (np.abs(body[:, span2]) <= slack[span2])

    corner_idx, face_idx = np.nonzero(valid)
    if corner_idx.size == 0:
        empty = np.empty((0, 3))
        return empty, empty, corner_idx, face_idx
    proj_body = body[corner_idx].copy()
    proj_body[np.arange(corner_idx.size), axes[face_idx]] = planes[face_idx]
    proj_world = proj_body @ face_box.rotation.T + face_box.center
    return corner_box.corners[corner_idx], proj_world, corner_idx, face_idx


def _corner_edge_case(corner_box: OrientedBox, edge_box: OrientedBox, tol: float):
    """Valid corner-onto-edge projections (8 x 12), in world coordinates."""
    c = corner_box.corners
    starts = edge_box.corners[EDGE_STARTS]
    slopes = edge_box.corners[EDGE_ENDS] - starts
    slope_sq = (slopes * slopes).sum(axis=1)
    t = ((c[:, None, :] - starts[None, :, :]) * slopes[None, :, :]).sum(axis=-1) / slope_sq[None, :]
    valid = (t >= -tol) & (t <= 1.0 + tol)
    corner_idx, edge_idx = np.nonzero(valid)
    if corner_idx.size == 0:
        empty = np.empty((0, 3))
        return empty, empty, corner_idx, edge_idx
    proj = starts[edge_idx] + t[corner_idx, edge_idx][:, None] * slopes[edge_idx]
    return c[corner_idx], proj, corner_idx, edge_idx


def _edge_edge_case(box_a: OrientedBox, box_b: OrientedBox, tol: float):
    """Valid closest-point pairs over all 144 edge pairs (parallel skipped)."""
    a_start = box_a.corners[EDGE_STARTS]
    a_slope = box_a.corners[EDGE_ENDS] - a_start
    b_start = box_b.corners[EDGE_STARTS]
    b_slope = box_b.corners[EDGE_ENDS] - b_start

    asq = (a_slope * a_slope).sum(axis=1)
    bsq = (b_slope * b_slope).sum(axis=1)
    cross = a_slope @ b_slope.T
    gram = asq[:, None] * bsq[None, :] - cross * cross
    nonparallel = np.abs(gram) > PARALLEL_REL * asq[:, None] * bsq[None, :]

    d = a_start[:, None, :] - b_start[None, :, :]
    mad = (d * a_slope[:, None, :]).sum(axis=-1)
    mbd = (d * b_slope[None, :, :]).sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_a = (cross * mbd - bsq[None, :] * mad) / gram
        t_b = (asq[:, None] * mbd - cross * mad) / gram
    valid = nonparallel & (t_a >= -tol) & (t_a <= 1.0 + tol) & (t_b >= -tol) & (t_b <= 1.0 + tol)
    idx_a, idx_b = np.nonzero(valid)
    if idx_a.size == 0:
        empty = np.empty((0, 3))
        return empty, empty, idx_a, idx_b
    pa = a_start[idx_a] + t_a[idx_a, idx_b][:, None] * a_slope[idx_a]
    pb = b_start[idx_b] + t_b[idx_a, idx_b][:, None] * b_slope[idx_b]
    return pa, pb, idx_a, idx_b


def _all_cases(box_a: OrientedBox, box_b: OrientedBox, tol: float):
    """Yield (kind, points_a, points_b, indices_a, indices_b) per PPOI family."""
    pa, pb, ia, ib = _corner_face_case(box_a, box_b, tol)
    yield PairKind.CORNER_A_FACE_B, pa, pb, ia, ib
    pb2, pa2, ib2, ia2 = _corner_face_case(box_b, box_a, tol)
    yield PairKind.CORNER_B_FACE_A, pa2, pb2, ia2, ib2
    pa, pb, ia, ib = _corner_edge_case(box_a, box_b, tol)
    yield PairKind.CORNER_A_EDGE_B, pa, pb, ia, ib
    pb2, pa2, ib2, ia2 = _corner_edge_case(box_b, box_a, tol)
    yield PairKind.CORNER_B_EDGE_A, pa2, pb2, ia2, ib2
    pa, pb, ia, ib = _edge_edge_case(box_a, box_b, tol)
    yield PairKind.EDGE_A_EDGE_B, pa, pb, ia, ib
    ia, ib = np.divmod(np.arange(64), 8)
    yield PairKind.CORNER_A_CORNER_B, box_a.corners[ia], box_b.corners[ib], ia, ib


def enumerate_ppois(box_a: OrientedBox, box_b: OrientedBox, tol: float = DEFAULT_TOL) -> list[PointPair]:
    """All valid point-pairs of interest; at most 496, always 64 corner pairs."""
    pairs: list[PointPair] = []
    for kind, pa, pb, ia, ib in _all_cases(box_a, box_b, tol):
        if len(ia) == 0:
            continue
        dist = np.linalg.norm(pa - pb, axis=1)
        pairs.extend(
            PointPair(a, b, float(dd), kind, int(i), int(j))
            for a, b, dd, i, j in zip(pa, pb, dist, ia, ib)
        )
    return pairs


def _min_surface_distance(box_a: OrientedBox, box_b: OrientedBox, tol: float) -> float:
    best = np.inf
    for _, pa, pb, ia, _ in _all_cases(box_a, box_b, tol):
        if len(ia) == 0:
            continue
        diff = pa - pb
        d = (diff * diff).sum(axis=1).min()
        if d < best:
            best = d
    return float(np.sqrt(best))


def v2v(box_a: OrientedBox, box_b: OrientedBox, tol: float = DEFAULT_TOL) -> float:
    """Shortest distance between the box hulls; 0 whenever the boxes overlap."""
    if intersection_volume(box_a, box_b, tol) > 0.0:
        return 0.0
    return _min_surface_distance(box_a, box_b, tol)
