"""Unsigned distance field queries for posed primitives."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import EmptySceneError, InvalidInputError
from .backend import kernels
from .shapes import Pose2, ShapeSpec, shape_table


@dataclass
class DfSample:
    """One field query: unsigned distance, unit outward normal at the closest
    boundary point, the boundary point itself, and which shape produced it.

    ``degenerate`` marks center/medial-axis queries whose closest boundary
    point is not unique; those carry the conventional (1, 0) local gradient
    and are excluded from gradient checks.
    """

    distance: float
    gradient: np.ndarray
    closest_point: np.ndarray
    source_index: int = -1
    degenerate: bool = False


def _check_point(point):
    px, py = float(point[0]), float(point[1])
    if not (math.isfinite(px) and math.isfinite(py)):
        raise InvalidInputError("query point must be finite")
    return px, py


def udf_eval(shape: ShapeSpec, pose: Pose2, point) -> DfSample:
    """Evaluate the shape's unsigned distance field at a world point."""
    px, py = _check_point(point)
    pa, pb = shape.scaled_params()
    cosr = math.cos(pose.rotation)
    sinr = math.sin(pose.rotation)
    d, gx, gy, cx, cy, fl = kernels.udf_point(
        shape.kind_code, pa, pb,
        pose.translation[0], pose.translation[1], cosr, sinr, px, py,
    )
    return DfSample(d, np.array([gx, gy]), np.array([cx, cy]),
                    source_index=-1, degenerate=bool(fl))


def udf_union(samples) -> DfSample:
    """Keep the minimum-distance sample; ties go to the lowest index."""
    samples = list(samples)
    if not samples:
        raise EmptySceneError("union of zero samples")
    best = samples[0]
    src = 0
    for i, s in enumerate(samples[1:], start=1):
        if s.distance < best.distance:
            best = s
            src = i
    return DfSample(best.distance, best.gradient, best.closest_point,
                    source_index=src, degenerate=best.degenerate)


class Scene:
    """A posed shape collection packed once for repeated kernel queries."""

    def __init__(self, shapes_and_poses):
        self.entries = list(shapes_and_poses)
        self.table = shape_table(self.entries)
        self.n = len(self.entries)

    def eval(self, point) -> DfSample:
        px, py = _check_point(point)
        if self.n == 0:
            raise EmptySceneError("scene has no shapes")
        d, gx, gy, cx, cy, fl, src = kernels.udf_scene(self.table, self.n, px, py)
        return DfSample(d, np.array([gx, gy]), np.array([cx, cy]),
                        source_index=src, degenerate=bool(fl))

    def distance(self, point) -> float:
        px, py = _check_point(point)
        if self.n == 0:
            raise EmptySceneError("scene has no shapes")
        return kernels.scene_distance(self.table, self.n, px, py)

    def depth_scan(self, origin, dirs_x, dirs_y, max_range, tol=1e-4) -> np.ndarray:
        """Sphere-trace one range per ray direction (empty scene: max_range)."""
        out = np.empty(len(dirs_x), dtype=np.float64)
        kernels.depth_scan(
            self.table, self.n, float(origin[0]), float(origin[1]),
            np.ascontiguousarray(dirs_x, dtype=np.float64),
            np.ascontiguousarray(dirs_y, dtype=np.float64),
            float(max_range), float(tol), out,
        )
        return out
