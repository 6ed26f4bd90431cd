"""Exact intersection volume and IoU of two oriented boxes.

Pipeline: enumerate candidate corner points of the intersection polytope
(corners of either box plus edge/face-plane crossings), keep the points
contained in both boxes, and take the volume of their convex hull.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import (
    DEFAULT_TOL,
    EDGE_ENDS,
    EDGE_STARTS,
    FACE_NORMAL_AXES,
    FACE_NORMAL_SIGNS,
    OrientedBox,
    contains_point,
    unit_to_world,
    world_to_unit,
)
from .hull import ConvexPolytope, DegenerateHullError, convex_hull, polytope_volume

__all__ = [
    "CandidateKind",
    "CandidatePoint",
    "ConvexPolytope",
    "DegenerateHullError",
    "convex_hull",
    "polytope_volume",
    "edge_face_intersections",
    "candidate_points",
    "filter_valid",
    "intersection_volume",
    "iou",
]

# Candidate points closer than this (relative to the larger box diagonal) are
# merged; coincident corner and edge-face hits are common in aligned cases.
DEDUPE_REL = 1e-9

# Edge slopes with a plane-normal component below this (relative to the slope
# length) make the line/plane system singular: parallel or in-plane edges.
_SINGULAR_REL = 1e-12

_FACE_AXES = np.array(FACE_NORMAL_AXES)
_FACE_TARGETS = 0.5 * np.array(FACE_NORMAL_SIGNS)

_log = logging.getLogger(__name__)


class CandidateKind(Enum):
    CORNER_OF_A = "corner_of_a"
    CORNER_OF_B = "corner_of_b"
    EDGE_A_FACE_B = "edge_a_face_b"
    EDGE_B_FACE_A = "edge_b_face_a"


@dataclass(frozen=True)
class CandidatePoint:
    """A potential intersection-polytope corner and the features producing it."""

    position: np.ndarray
    kind: CandidateKind
    corner_index: int | None = None
    edge_index: int | None = None
    face_index: int | None = None

    def __post_init__(self):
        if self.edge_index is not None and not 0 <= self.edge_index < 12:
            raise ValueError("edge_index out of range")
        if self.face_index is not None and not 0 <= self.face_index < 6:
            raise ValueError("face_index out of range")
        if self.corner_index is not None and not 0 <= self.corner_index < 8:
            raise ValueError("corner_index out of range")


def _edge_face_hits(edge_box: OrientedBox, face_box: OrientedBox, tol: float):
    """Crossings of edge_box's 12 edges with face_box's 6 face planes.

    Solved in face_box's unit frame, where each face plane is an axis plane;
    these are the same line/plane systems as the world-frame 3x3 form, with
    the same singularity condition (edge parallel to or inside the plane).
    Returns (world points (m, 3), edge indices, face indices, singular count).
    """
    corners_unit = world_to_unit(face_box, edge_box.corners)
    starts = corners_unit[EDGE_STARTS]
    slopes = corners_unit[EDGE_ENDS] - starts

    slope_axis = slopes[:, _FACE_AXES]
    start_axis = starts[:, _FACE_AXES]
    slope_len = np.linalg.norm(slopes, axis=1)
    nonsingular = np.abs(slope_axis) > _SINGULAR_REL * slope_len[:, None]
    singular = int(nonsingular.size - np.count_nonzero(nonsingular))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (_FACE_TARGETS[None, :] - start_axis) / slope_axis
    ok = nonsingular & (t >= -tol) & (t <= 1.0 + tol)
    edge_idx, face_idx = np.nonzero(ok)
    if edge_idx.size == 0:
        return np.empty((0, 3)), edge_idx, face_idx, singular
    unit_pts = starts[edge_idx] + slopes[edge_idx] * t[edge_idx, face_idx][:, None]
    return unit_to_world(face_box, unit_pts), edge_idx, face_idx, singular


def edge_face_intersections(
    box_a: OrientedBox, box_b: OrientedBox, tol: float = DEFAULT_TOL
) -> list[CandidatePoint]:
    """All edge/face-plane crossings between the boxes, both directions.

    Singular systems are skipped (count logged at debug level); the edge
    parameter is accepted on the closed window [-tol, 1+tol] so corner
    grazings survive. Face-parameter bounds are left to the dual
    containment filter.
    """
    out = []
    pts, e_idx, f_idx, singular_ab = _edge_face_hits(box_a, box_b, tol)
    for p, e, f in zip(pts, e_idx, f_idx):
        out.append(CandidatePoint(p, CandidateKind.EDGE_A_FACE_B, edge_index=int(e), face_index=int(f)))
    pts, e_idx, f_idx, singular_ba = _edge_face_hits(box_b, box_a, tol)
    for p, e, f in zip(pts, e_idx, f_idx):
        out.append(CandidatePoint(p, CandidateKind.EDGE_B_FACE_A, edge_index=int(e), face_index=int(f)))
    if singular_ab or singular_ba:
        _log.debug("skipped %d singular edge/face systems", singular_ab + singular_ba)
    return out


def candidate_points(
    box_a: OrientedBox, box_b: OrientedBox, tol: float = DEFAULT_TOL
) -> list[CandidatePoint]:
    """Unfiltered candidates: 16 corners plus the edge/face crossings."""
    out = [
        CandidatePoint(p, CandidateKind.CORNER_OF_A, corner_index=i)
        for i, p in enumerate(box_a.corners)
    ]
    out += [
        CandidatePoint(p, CandidateKind.CORNER_OF_B, corner_index=i)
        for i, p in enumerate(box_b.corners)
    ]
    out += edge_face_intersections(box_a, box_b, tol)
    return out


def _candidate_positions(box_a: OrientedBox, box_b: OrientedBox, tol: float) -> np.ndarray:
    parts = [box_a.corners, box_b.corners]
    pts, _, _, _ = _edge_face_hits(box_a, box_b, tol)
    if pts.size:
        parts.append(pts)
    pts, _, _, _ = _edge_face_hits(box_b, box_a, tol)
    if pts.size:
        parts.append(pts)
    return np.concatenate(parts, axis=0)


def filter_valid(points, box_a: OrientedBox, box_b: OrientedBox, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Keep points contained in both boxes; sort canonically and deduplicate.

    The lexicographic sort makes the surviving list independent of input
    order, so downstream hull volumes are symmetric in the box arguments.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if pts.shape[0] == 0:
        return pts
    keep = contains_point(box_a, pts, tol) & contains_point(box_b, pts, tol)
    pts = pts[keep]
    if pts.shape[0] == 0:
        return pts
    order = np.lexsort((pts[:, 2], pts[:, 1], pts[:, 0]))
    pts = pts[order]

    radius_sq = (DEDUPE_REL * max(box_a.diagonal, box_b.diagonal)) ** 2
    kept: list[tuple[float, float, float]] = []
    for x, y, z in pts.tolist():
        for kx, ky, kz in kept:
            if (x - kx) ** 2 + (y - ky) ** 2 + (z - kz) ** 2 <= radius_sq:
                break
        else:
            kept.append((x, y, z))
    return np.array(kept)


def _boxes_separated(box_a: OrientedBox, box_b: OrientedBox) -> bool:
    """Separating-axis test (15 axes); True only for clearly disjoint boxes.

    Used purely as an early out: touching or near-touching pairs fall
    through to the exact candidate pipeline.
    """
    ra = box_a.rotation
    t3 = ra.T @ (box_b.center - box_a.center)
    c = ra.T @ box_b.rotation
    t = t3.tolist()
    rot = c.tolist()
    # the epsilon keeps near-parallel cross axes conservative
    ab = [[abs(v) + 1e-12 for v in row] for row in rot]
    a = (box_a.dimensions * 0.5).tolist()
    b = (box_b.dimensions * 0.5).tolist()

    for i in range(3):
        if abs(t[i]) > a[i] + b[0] * ab[i][0] + b[1] * ab[i][1] + b[2] * ab[i][2]:
            return True
    for j in range(3):
        lhs = abs(t[0] * rot[0][j] + t[1] * rot[1][j] + t[2] * rot[2][j])
        if lhs > b[j] + a[0] * ab[0][j] + a[1] * ab[1][j] + a[2] * ab[2][j]:
            return True
    for i in range(3):
        i1, i2 = (i + 1) % 3, (i + 2) % 3
        for j in range(3):
            j1, j2 = (j + 1) % 3, (j + 2) % 3
            lhs = abs(t[i2] * rot[i1][j] - t[i1] * rot[i2][j])
            rhs = a[i1] * ab[i2][j] + a[i2] * ab[i1][j] + b[j1] * ab[i][j2] + b[j2] * ab[i][j1]
            if lhs > rhs:
                return True
    return False


def intersection_volume(box_a: OrientedBox, box_b: OrientedBox, tol: float = DEFAULT_TOL) -> float:
    """Exact volume of the intersection polytope; 0 when it degenerates.

    This is the single source of truth for overlap: both iou and the
    volume-to-volume distance consult it, so they can never disagree.
    """
    if _boxes_separated(box_a, box_b):
        return 0.0
    pts = filter_valid(_candidate_positions(box_a, box_b, tol), box_a, box_b, tol)
    if pts.shape[0] < 4:
        return 0.0
    try:
        return convex_hull(pts).volume
    except DegenerateHullError:
        # all valid points in a plane: zero-volume contact
        return 0.0


def iou(box_a: OrientedBox, box_b: OrientedBox, tol: float = DEFAULT_TOL) -> float:
    """Volumetric intersection over union, in [0, 1]."""
    inter = intersection_volume(box_a, box_b, tol)
    union = box_a.volume + box_b.volume - inter
    return min(max(inter / union, 0.0), 1.0)
