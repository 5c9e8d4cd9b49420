# Copyright (c) 2026 The spherevis Authors
# SPDX-License-Identifier: Apache-2.0
"""Visibility of 3D bounding boxes seen from the ego origin.

The heavy lifting lives in the compiled ``_spherevis`` extension: exact
spherical-polygon occlusion geometry, a seeded Monte-Carlo ray oracle,
KITTI label ingestion, and synthetic scene generation.
"""

from ._spherevis import (
    Backend,
    ClassLabel,
    DegeneratePolygonError,
    InsufficientHitsError,
    ObjectBox,
    OracleEstimate,
    OriginInsideBoxError,
    ParseError,
    Scene,
    SphericalPolygon,
    Vec3,
    VisibilityRecord,
    box_iou,
    box_solid_angle,
    estimate_solid_angle,
    estimate_visibility,
    generate_scene,
    parse_kitti_labels,
    silhouette,
    solid_angle,
    visibility_all,
)

__all__ = [
    "Backend",
    "ClassLabel",
    "DegeneratePolygonError",
    "InsufficientHitsError",
    "ObjectBox",
    "OracleEstimate",
    "OriginInsideBoxError",
    "ParseError",
    "Scene",
    "SphericalPolygon",
    "Vec3",
    "VisibilityRecord",
    "box_iou",
    "box_solid_angle",
    "estimate_solid_angle",
    "estimate_visibility",
    "generate_scene",
    "parse_kitti_labels",
    "silhouette",
    "solid_angle",
    "visibility_all",
]

__version__ = "1.0.0"
