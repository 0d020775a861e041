"""Finite-difference verification of analytic gradients."""

from __future__ import annotations

import numpy as np

from .shapes import Pose2, ShapeSpec
from .udf import udf_eval


def fd_gradient_check(shape: ShapeSpec, pose: Pose2, point, step: float) -> float:
    """Relative error between the analytic and central-difference gradient.

    Callers are responsible for keeping the point at least 10*step away from
    the boundary and the medial axis; inside that band the field is not
    differentiable and the comparison is meaningless.
    """
    p = np.asarray(point, dtype=np.float64)
    g = udf_eval(shape, pose, p).gradient
    fd = np.empty(2)
    for i in range(2):
        hi = p.copy()
        lo = p.copy()
        hi[i] += step
        lo[i] -= step
        fd[i] = (udf_eval(shape, pose, hi).distance
                 - udf_eval(shape, pose, lo).distance) / (2.0 * step)
    return float(np.linalg.norm(g - fd) / max(1.0, np.linalg.norm(g)))
