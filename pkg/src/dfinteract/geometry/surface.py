"""Boundary sampling and the brute-force distance oracle."""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidInputError
from .shapes import BOX, CAPSULE, DISK, Pose2, ShapeSpec


def _boundary_points(shape: ShapeSpec, arcs: np.ndarray) -> np.ndarray:
    """Map arc-length parameters to local boundary points (counterclockwise)."""
    pa, pb = shape.scaled_params()
    pts = np.empty((len(arcs), 2))
    if shape.kind == DISK:
        ang = arcs / pa
        pts[:, 0] = pa * np.cos(ang)
        pts[:, 1] = pa * np.sin(ang)
        return pts
    if shape.kind == BOX:
        hx, hy = pa, pb
        e0, e1, e2 = 2 * hy, 2 * hy + 2 * hx, 4 * hy + 2 * hx
        for i, s in enumerate(arcs):
            if s < e0:
                pts[i] = (hx, -hy + s)
            elif s < e1:
                pts[i] = (hx - (s - e0), hy)
            elif s < e2:
                pts[i] = (-hx, hy - (s - e1))
            else:
                pts[i] = (-hx + (s - e2), -hy)
        return pts
    # capsule: right cap, top edge, left cap, bottom edge
    hl, r = pa, pb
    cap = math.pi * r
    e0, e1, e2 = cap, cap + 2 * hl, 2 * cap + 2 * hl
    for i, s in enumerate(arcs):
        if s < e0:
            phi = -0.5 * math.pi + s / r
            pts[i] = (hl + r * math.cos(phi), r * math.sin(phi))
        elif s < e1:
            pts[i] = (hl - (s - e0), r)
        elif s < e2:
            phi = 0.5 * math.pi + (s - e1) / r
            pts[i] = (-hl + r * math.cos(phi), r * math.sin(phi))
        else:
            pts[i] = (-hl + (s - e2), -r)
    return pts


def sample_surface(shape: ShapeSpec, pose: Pose2, count: int, seed: int) -> np.ndarray:
    """Stratified arc-length-uniform points on the zero-level set (world frame).

    One point per equal-length boundary cell, jittered inside its cell, so the
    largest gap between consecutive samples is below two cell lengths.
    """
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    rng = np.random.default_rng(seed)
    perim = shape.perimeter()
    arcs = (np.arange(count) + rng.random(count)) * (perim / count)
    local = _boundary_points(shape, arcs)
    c, s = math.cos(pose.rotation), math.sin(pose.rotation)
    world = np.empty_like(local)
    world[:, 0] = c * local[:, 0] - s * local[:, 1] + pose.translation[0]
    world[:, 1] = s * local[:, 0] + c * local[:, 1] + pose.translation[1]
    return world


def oracle_min_distance(points: np.ndarray, query) -> float:
    """Brute-force minimum distance from a query to a boundary point cloud."""
    q = np.asarray(query, dtype=np.float64)
    d = points - q
    return float(np.sqrt(np.min(d[:, 0] ** 2 + d[:, 1] ** 2)))
