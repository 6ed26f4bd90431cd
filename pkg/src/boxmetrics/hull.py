"""Incremental 3D convex hull with an explicit coplanarity epsilon."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Points closer to a face plane than HULL_EPS_REL times the cloud diameter are
# treated as lying on it.
HULL_EPS_REL = 1e-10


class DegenerateHullError(Exception):
    """Fewer than 4 affinely independent points: the hull has zero volume."""


@dataclass(frozen=True)
class ConvexPolytope:
    """Triangulated convex hull: vertices, outward-oriented faces, volume."""

    vertices: np.ndarray
    faces: tuple[tuple[int, int, int], ...]
    volume: float


def convex_hull(points) -> ConvexPolytope:
    """Build the convex hull of a 3D point set.

    Raises DegenerateHullError when the points are empty, collinear, or
    coplanar; callers map that to zero intersection volume.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if pts.shape[0] < 4:
        raise DegenerateHullError("need at least 4 points")
    raw = [tuple(row) for row in pts.tolist()]

    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    diameter = float(np.linalg.norm(hi - lo))
    if diameter <= 0.0:
        raise DegenerateHullError("all points coincide")
    eps = HULL_EPS_REL * diameter

    face_list = _incremental_hull(raw, eps)

    used = sorted({i for f in face_list for i in f})
    remap = {old: new for new, old in enumerate(used)}
    vertices = pts[used]
    faces = tuple((remap[a], remap[b], remap[c]) for a, b, c in face_list)
    volume = _signed_volume(vertices, faces, vertices.mean(axis=0))
    vertices.flags.writeable = False
    return ConvexPolytope(vertices=vertices, faces=faces, volume=abs(volume))


def polytope_volume(poly: ConvexPolytope, reference=None) -> float:
    """Volume by summing signed tetrahedra against a reference point.

    The result is independent of the reference (default: vertex centroid)
    because the faces form a closed, consistently oriented surface.
    """
    ref = poly.vertices.mean(axis=0) if reference is None else np.asarray(reference, dtype=float)
    return abs(_signed_volume(poly.vertices, poly.faces, ref))


def _signed_volume(vertices: np.ndarray, faces, reference) -> float:
    total = 0.0
    rx, ry, rz = reference
    v = vertices
    for a, b, c in faces:
        ax, ay, az = v[a, 0] - rx, v[a, 1] - ry, v[a, 2] - rz
        bx, by, bz = v[b, 0] - rx, v[b, 1] - ry, v[b, 2] - rz
        cx, cy, cz = v[c, 0] - rx, v[c, 1] - ry, v[c, 2] - rz
        total += ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx)
    return total / 6.0


def _incremental_hull(pts: list[tuple[float, float, float]], eps: float) -> list[tuple[int, int, int]]:
    simplex = _initial_simplex(pts, eps)
    i0, i1, i2, i3 = simplex
    interior = tuple((pts[i0][k] + pts[i1][k] + pts[i2][k] + pts[i3][k]) / 4.0 for k in range(3))

    # faces: (a, b, c) -> (nx, ny, nz, offset) with unit outward normal.
    faces: dict[tuple[int, int, int], tuple[float, float, float, float]] = {}

    def add_face(a: int, b: int, c: int) -> None:
        pa, pb, pc = pts[a], pts[b], pts[c]
        ux, uy, uz = pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]
        vx, vy, vz = pc[0] - pa[0], pc[1] - pa[1], pc[2] - pa[2]
        nx = uy * vz - uz * vy
        ny = uz * vx - ux * vz
        nz = ux * vy - uy * vx
        norm = (nx * nx + ny * ny + nz * nz) ** 0.5
        if norm <= 0.0:
            return  # sliver face; neighbors carry its plane
        nx, ny, nz = nx / norm, ny / norm, nz / norm
        off = nx * pa[0] + ny * pa[1] + nz * pa[2]
        if nx * interior[0] + ny * interior[1] + nz * interior[2] > off:
            a, b, c = a, c, b
            nx, ny, nz, off = -nx, -ny, -nz, -off
        faces[(a, b, c)] = (nx, ny, nz, off)

    add_face(i0, i1, i2)
    add_face(i0, i1, i3)
    add_face(i0, i2, i3)
    add_face(i1, i2, i3)

    in_simplex = set(simplex)
    for idx, p in enumerate(pts):
        if idx in in_simplex:
            continue
        px, py, pz = p
        visible = [
            key
            for key, (nx, ny, nz, off) in faces.items()
            if nx * px + ny * py + nz * pz - off > eps
        ]
        if not visible:
            continue
        edge_set = set()
        for a, b, c in visible:
            edge_set.update(((a, b), (b, c), (c, a)))
        horizon = [(a, b) for a, b in edge_set if (b, a) not in edge_set]
        for key in visible:
            del faces[key]
        for a, b in horizon:
            add_face(a, b, idx)

    return list(faces.keys())


def _initial_simplex(pts: list[tuple[float, float, float]], eps: float) -> tuple[int, int, int, int]:
    n = len(pts)
    i0 = min(range(n), key=lambda i: pts[i])

    p0 = pts[i0]
    best, i1 = -1.0, -1
    for i in range(n):
        p = pts[i]
        d = (p[0] - p0[0]) ** 2 + (p[1] - p0[1]) ** 2 + (p[2] - p0[2]) ** 2
        if d > best:
            best, i1 = d, i
    if best <= eps * eps:
        raise DegenerateHullError("all points coincide")

    p1 = pts[i1]
    ux, uy, uz = p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]
    best, i2 = -1.0, -1
    for i in range(n):
        p = pts[i]
        wx, wy, wz = p[0] - p0[0], p[1] - p0[1], p[2] - p0[2]
        cx = uy * wz - uz * wy
        cy = uz * wx - ux * wz
        cz = ux * wy - uy * wx
        d = cx * cx + cy * cy + cz * cz
        if d > best:
            best, i2 = d, i
    ulen2 = ux * ux + uy * uy + uz * uz
    if best <= (eps * eps) * ulen2:
        raise DegenerateHullError("points are collinear")

    p2 = pts[i2]
    vx, vy, vz = p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]
    nx = uy * vz - uz * vy
    ny = uz * vx - ux * vz
    nz = ux * vy - uy * vx
    nlen = (nx * nx + ny * ny + nz * nz) ** 0.5
    nx, ny, nz = nx / nlen, ny / nlen, nz / nlen
    best, i3 = -1.0, -1
    for i in range(n):
        p = pts[i]
        d = abs(nx * (p[0] - p0[0]) + ny * (p[1] - p0[1]) + nz * (p[2] - p0[2]))
        if d > best:
            best, i3 = d, i
    if best <= eps:
        raise DegenerateHullError("points are coplanar")

    return i0, i1, i2, i3
