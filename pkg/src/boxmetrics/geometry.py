"""Oriented-box primitives: rotations, transforms, cuboid topology, containment."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

# Containment / validity tolerance, expressed in unit-cube coordinates.
DEFAULT_TOL = 1e-9

# Rotation matrices drifting from orthonormality by more than this are data
# errors; anything within is re-projected onto SO(3).
ROTATION_ACCEPT_TOL = 1e-6
_ROTATION_SNAP_TOL = 1e-12

# Corners of the unit cube centered at the origin, one row per corner.
UNIT_CORNERS = np.array(
    [
        [-0.5, -0.5, -0.5],
        [0.5, -0.5, -0.5],
        [-0.5, 0.5, -0.5],
        [-0.5, -0.5, 0.5],
        [0.5, 0.5, 0.5],
        [-0.5, 0.5, 0.5],
        [0.5, -0.5, 0.5],
        [0.5, 0.5, -0.5],
    ],
    dtype=float,
)
UNIT_CORNERS.flags.writeable = False

# Edges as ordered corner-index pairs; each joins corners differing in one axis.
EDGES = (
    (0, 1), (1, 7), (2, 7), (0, 2),
    (3, 6), (6, 4), (5, 4), (3, 5),
    (0, 3), (1, 6), (7, 4), (2, 5),
)

# Faces as ordered corner-index triples: plane origin plus the two span ends.
FACES = (
    (0, 1, 2), (0, 1, 3), (0, 2, 3),
    (4, 5, 6), (4, 5, 7), (4, 6, 7),
)

# Outward normal of face k is FACE_NORMAL_SIGNS[k] times rotation column
# FACE_NORMAL_AXES[k].
FACE_NORMAL_AXES = (2, 1, 0, 2, 1, 0)
FACE_NORMAL_SIGNS = (-1.0, -1.0, -1.0, 1.0, 1.0, 1.0)

EDGE_STARTS = np.array([e[0] for e in EDGES])
EDGE_ENDS = np.array([e[1] for e in EDGES])
EDGE_STARTS.flags.writeable = False
EDGE_ENDS.flags.writeable = False


@dataclass(frozen=True)
class CuboidTopology:
    """Constant corner/edge/face tables of the canonical unit cube."""

    unit_corners: np.ndarray
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[int, int, int], ...]
    face_normal_axes: tuple[int, ...]
    face_normal_signs: tuple[float, ...]


CUBOID = CuboidTopology(UNIT_CORNERS, EDGES, FACES, FACE_NORMAL_AXES, FACE_NORMAL_SIGNS)


class GimbalLockWarning(UserWarning):
    """Euler decomposition is non-unique when the pitch is at +-pi/2."""


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_from_quaternion(q) -> np.ndarray:
    """Rotation matrix from a [w, x, y, z] quaternion (normalized internally)."""
    q = np.asarray(q, dtype=float).reshape(4)
    n = float(np.dot(q, q))
    if not math.isfinite(n) or n <= 0.0:
        raise ValueError("quaternion must be nonzero and finite")
    w, x, y, z = q / math.sqrt(n)
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def quaternion_from_rotation(rotation: np.ndarray) -> np.ndarray:
    """Unit quaternion [w, x, y, z] of a rotation matrix."""
    r = np.asarray(rotation, dtype=float)
    t = r[0, 0] + r[1, 1] + r[2, 2]
    if t > 0.0:
        s = math.sqrt(t + 1.0) * 2.0
        q = [0.25 * s, (r[2, 1] - r[1, 2]) / s, (r[0, 2] - r[2, 0]) / s, (r[1, 0] - r[0, 1]) / s]
    elif r[0, 0] >= r[1, 1] and r[0, 0] >= r[2, 2]:
        s = math.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2]) * 2.0
        q = [(r[2, 1] - r[1, 2]) / s, 0.25 * s, (r[0, 1] + r[1, 0]) / s, (r[0, 2] + r[2, 0]) / s]
    elif r[1, 1] >= r[2, 2]:
        s = math.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2]) * 2.0
        q = [(r[0, 2] - r[2, 0]) / s, (r[0, 1] + r[1, 0]) / s, 0.25 * s, (r[1, 2] + r[2, 1]) / s]
    else:
        s = math.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1]) * 2.0
        q = [(r[1, 0] - r[0, 1]) / s, (r[0, 2] + r[2, 0]) / s, (r[1, 2] + r[2, 1]) / s, 0.25 * s]
    q = np.array(q)
    return q / np.linalg.norm(q)


def rotation_from_euler_xyz(angles) -> np.ndarray:
    """Rotation matrix from intrinsic X-Y-Z Euler angles in radians."""
    rx, ry, rz = np.asarray(angles, dtype=float).reshape(3)
    return rot_x(rx) @ rot_y(ry) @ rot_z(rz)


def euler_xyz_from_rotation(rotation: np.ndarray) -> np.ndarray:
    """Intrinsic X-Y-Z Euler angles of a rotation matrix.

    Warns with GimbalLockWarning when the pitch is within 1e-6 of +-pi/2;
    the roll/yaw split is then conventional (yaw forced to 0).
    """
    r = np.asarray(rotation, dtype=float)
    sy = float(np.clip(r[0, 2], -1.0, 1.0))
    pitch = math.asin(sy)
    if abs(abs(pitch) - math.pi / 2.0) < 1e-6:
        warnings.warn("pitch at +-pi/2: euler decomposition non-unique", GimbalLockWarning)
        return np.array([math.atan2(r[2, 1], r[1, 1]), pitch, 0.0])
    roll = math.atan2(-r[1, 2], r[2, 2])
    yaw = math.atan2(-r[0, 1], r[0, 0])
    return np.array([roll, pitch, yaw])


def wrap_angle(angle: float) -> float:
    """Map an angle to the interval (-pi, pi]."""
    r = math.fmod(angle + math.pi, 2.0 * math.pi)
    if r <= 0.0:
        r += 2.0 * math.pi
    return r - math.pi


def _project_to_rotation(matrix: np.ndarray) -> np.ndarray:
    u, _, vt = np.linalg.svd(matrix)
    r = u @ vt
    if np.linalg.det(r) < 0.0:
        r = (u * np.array([1.0, 1.0, -1.0])) @ vt
    return r


@dataclass(frozen=True)
class OrientedBox:
    """A cuboid with center, right-handed rotation, and positive extents."""

    center: np.ndarray
    rotation: np.ndarray
    dimensions: np.ndarray

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(3)
        dims = np.asarray(self.dimensions, dtype=float).reshape(3)
        rot = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        if not np.all(np.isfinite(center)):
            raise ValueError("center must be finite")
        if not np.all(np.isfinite(dims)) or np.any(dims <= 0.0):
            raise ValueError("dimensions must be strictly positive")
        if not np.all(np.isfinite(rot)):
            raise ValueError("rotation must be finite")
        drift = float(np.abs(rot.T @ rot - np.eye(3)).max())
        if drift > ROTATION_ACCEPT_TOL:
            raise ValueError(f"rotation is not orthonormal (drift {drift:.3g})")
        if np.linalg.det(rot) < 0.0:
            raise ValueError("rotation must be right-handed (det +1)")
        if drift > _ROTATION_SNAP_TOL:
            rot = _project_to_rotation(rot)
        for arr in (center, rot, dims):
            arr.flags.writeable = False
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "dimensions", dims)

    @classmethod
    def from_quaternion(cls, center, quaternion, dimensions) -> "OrientedBox":
        return cls(center, rotation_from_quaternion(quaternion), dimensions)

    @classmethod
    def from_euler_xyz(cls, center, angles, dimensions) -> "OrientedBox":
        return cls(center, rotation_from_euler_xyz(angles), dimensions)

    @property
    def volume(self) -> float:
        return float(self.dimensions.prod())

    @property
    def diagonal(self) -> float:
        """Length of the space diagonal."""
        return float(np.linalg.norm(self.dimensions))

    @cached_property
    def corners(self) -> np.ndarray:
        """World positions of the 8 corners, rows ordered as UNIT_CORNERS."""
        c = box_corners(self)
        c.flags.writeable = False
        return c


def box_to_transform(box: OrientedBox) -> np.ndarray:
    """Homogeneous 4x4 mapping unit-cube coordinates to world coordinates."""
    t = np.eye(4)
    t[:3, :3] = box.rotation * box.dimensions  # R @ diag(d)
    t[:3, 3] = box.center
    return t


def transform_inverse(box: OrientedBox) -> np.ndarray:
    """Inverse of box_to_transform, computed analytically."""
    inv = np.eye(4)
    block = box.rotation.T / box.dimensions[:, None]  # diag(1/d) @ R^T
    inv[:3, :3] = block
    inv[:3, 3] = -block @ box.center
    return inv


def box_corners(box: OrientedBox) -> np.ndarray:
    """The 8 world-space corners, one per row, in canonical order."""
    return (UNIT_CORNERS * box.dimensions) @ box.rotation.T + box.center


def world_to_unit(box: OrientedBox, points) -> np.ndarray:
    """Map world points into the box's unit-cube frame.

    Accepts a single 3-vector or an (n, 3) array.
    """
    pts = np.asarray(points, dtype=float)
    return ((pts - box.center) @ box.rotation) / box.dimensions


def unit_to_world(box: OrientedBox, unit_points) -> np.ndarray:
    """Inverse of world_to_unit."""
    pts = np.asarray(unit_points, dtype=float)
    return (pts * box.dimensions) @ box.rotation.T + box.center


def contains_point(box: OrientedBox, point, tol: float = DEFAULT_TOL):
    """True when the point lies in the closed box, with unit-frame slack tol.

    Boundary points count as inside: every intersection corner candidate sits
    exactly on a box surface. Batched input (n, 3) yields a boolean array.
    """
    unit = world_to_unit(box, point)
    return np.all(np.abs(unit) <= 0.5 + tol, axis=-1)
