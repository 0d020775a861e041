"""Analytic unsigned distance fields for 2D primitives."""

from .backend import BACKEND, available_backends
from .checks import fd_gradient_check
from .shapes import BOX, CAPSULE, DISK, KINDS, Pose2, ShapeSpec, normalize_angle, shape_table
from .surface import oracle_min_distance, sample_surface
from .udf import DfSample, Scene, udf_eval, udf_union

__all__ = [
    "BACKEND",
    "BOX",
    "CAPSULE",
    "DISK",
    "DfSample",
    "KINDS",
    "Pose2",
    "Scene",
    "ShapeSpec",
    "available_backends",
    "fd_gradient_check",
    "normalize_angle",
    "oracle_min_distance",
    "sample_surface",
    "shape_table",
    "udf_eval",
    "udf_union",
]
