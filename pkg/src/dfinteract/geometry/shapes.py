"""Shape and pose descriptions for the 2D primitives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError

DISK = "disk"
BOX = "box"
CAPSULE = "capsule"

KINDS = (DISK, BOX, CAPSULE)
_KIND_CODES = {DISK: 0, BOX: 1, CAPSULE: 2}


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    r = math.remainder(theta, math.tau)
    if r == -math.pi:
        r = math.pi
    return r


@dataclass(frozen=True)
class Pose2:
    """Rigid placement: translation plus a rotation normalized to (-pi, pi]."""

    translation: tuple[float, float] = (0.0, 0.0)
    rotation: float = 0.0

    def __post_init__(self):
        tx, ty = float(self.translation[0]), float(self.translation[1])
        if not (math.isfinite(tx) and math.isfinite(ty) and math.isfinite(self.rotation)):
            raise InvalidInputError("pose components must be finite")
        object.__setattr__(self, "translation", (tx, ty))
        object.__setattr__(self, "rotation", normalize_angle(float(self.rotation)))

    def transform(self, p):
        """Map a local point to world coordinates."""
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        x, y = p
        return np.array([c * x - s * y + self.translation[0],
                         s * x + c * y + self.translation[1]])

    def rotate(self, v):
        """Rotate a local vector into the world frame."""
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        x, y = v
        return np.array([c * x - s * y, s * x + c * y])


@dataclass(frozen=True)
class ShapeSpec:
    """A 2D primitive with per-axis scale multipliers.

    params: disk -> (radius,), box -> (hx, hy), capsule -> (half_len, radius).
    Scale is folded into the params before any distance evaluation: box
    half-extents multiply per axis, a disk radius uses the mean axis scale,
    and a capsule scales its half-length by the axis scale and its radius by
    the perpendicular scale.
    """

    kind: str
    params: tuple[float, ...]
    scale: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown shape kind {self.kind!r}")
        expected = 1 if self.kind == DISK else 2
        if len(self.params) != expected:
            raise InvalidInputError(f"{self.kind} expects {expected} params")
        params = tuple(float(p) for p in self.params)
        scale = (float(self.scale[0]), float(self.scale[1]))
        if any(not math.isfinite(p) or p <= 0.0 for p in params):
            raise InvalidInputError("shape parameters must be finite and positive")
        if any(not math.isfinite(s) or s <= 0.0 for s in scale):
            raise InvalidInputError("scale components must be finite and positive")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "scale", scale)

    @property
    def kind_code(self) -> int:
        return _KIND_CODES[self.kind]

    def scaled_params(self) -> tuple[float, float]:
        """Fold the per-axis scale into kernel parameters (pa, pb)."""
        sx, sy = self.scale
        if self.kind == DISK:
            return self.params[0] * (0.5 * (sx + sy)), 0.0
        if self.kind == BOX:
            return self.params[0] * sx, self.params[1] * sy
        return self.params[0] * sx, self.params[1] * sy

    def bounding_radius(self) -> float:
        """Radius of the circumscribed circle around the scaled shape."""
        pa, pb = self.scaled_params()
        if self.kind == DISK:
            return pa
        if self.kind == BOX:
            return math.hypot(pa, pb)
        return pa + pb

    def width(self) -> float:
        """Diameter of the scaled bounding circle."""
        return 2.0 * self.bounding_radius()

    def perimeter(self) -> float:
        """Boundary length of the scaled shape."""
        pa, pb = self.scaled_params()
        if self.kind == DISK:
            return math.tau * pa
        if self.kind == BOX:
            return 4.0 * (pa + pb)
        return 4.0 * pa + math.tau * pb


def shape_table(shapes_and_poses) -> np.ndarray:
    """Pack (ShapeSpec, Pose2) pairs into the flat kernel table.

    Rows are (kind, pa, pb, tx, ty, cos rot, sin rot); trig is evaluated here
    once so both kernel backends see identical operands.
    """
    rows = np.empty(7 * len(shapes_and_poses), dtype=np.float64)
    for i, (shape, pose) in enumerate(shapes_and_poses):
        pa, pb = shape.scaled_params()
        o = 7 * i
        rows[o] = shape.kind_code
        rows[o + 1] = pa
        rows[o + 2] = pb
        rows[o + 3] = pose.translation[0]
        rows[o + 4] = pose.translation[1]
        rows[o + 5] = math.cos(pose.rotation)
        rows[o + 6] = math.sin(pose.rotation)
    return rows
