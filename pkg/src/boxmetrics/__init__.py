"""Metrics kernel for oriented 3D bounding boxes.

Exact volumetric IoU, exact volume-to-volume distance, the combined
disparity score, auxiliary pose metrics, and sampling-based oracles for
differential testing.
"""

__version__ = "0.1.0"

from .geometry import (
    CUBOID,
    DEFAULT_TOL,
    CuboidTopology,
    GimbalLockWarning,
    OrientedBox,
    box_corners,
    box_to_transform,
    contains_point,
    unit_to_world,
    world_to_unit,
)
from .hull import ConvexPolytope, DegenerateHullError, convex_hull, polytope_volume
from .intersection import (
    CandidateKind,
    CandidatePoint,
    candidate_points,
    edge_face_intersections,
    filter_valid,
    intersection_volume,
    iou,
)
from .distance import (
    PairKind,
    PointPair,
    closest_points_between_edges,
    enumerate_ppois,
    project_point_onto_edge,
    project_point_onto_face,
    v2v,
)
from .metrics import (
    MetricReport,
    PointCloud,
    UndefinedPointRatioError,
    bbd,
    euler_angle_difference,
    full_report,
    matrix_geodesic_distance,
    point_based_iou,
    position_difference,
    quaternion_distance,
    size_difference,
)
from .oracles import (
    OracleConfig,
    brute_segment_distance,
    mc_iou,
    random_box,
    random_box_pair,
    random_rotation,
    sampled_v2v,
)

__all__ = [
    "__version__",
    "CUBOID",
    "DEFAULT_TOL",
    "CuboidTopology",
    "GimbalLockWarning",
    "OrientedBox",
    "box_corners",
    "box_to_transform",
    "contains_point",
    "unit_to_world",
    "world_to_unit",
    "ConvexPolytope",
    "DegenerateHullError",
    "convex_hull",
    "polytope_volume",
    "CandidateKind",
    "CandidatePoint",
    "candidate_points",
    "edge_face_intersections",
    "filter_valid",
    "intersection_volume",
    "iou",
    "PairKind",
    "PointPair",
    "closest_points_between_edges",
    "enumerate_ppois",
    "project_point_onto_edge",
    "project_point_onto_face",
    "v2v",
    "MetricReport",
    "PointCloud",
    "UndefinedPointRatioError",
    "bbd",
    "euler_angle_difference",
    "full_report",
    "matrix_geodesic_distance",
    "point_based_iou",
    "position_difference",
    "quaternion_distance",
    "size_difference",
    "OracleConfig",
    "brute_segment_distance",
    "mc_iou",
    "random_box",
    "random_box_pair",
    "random_rotation",
    "sampled_v2v",
]
