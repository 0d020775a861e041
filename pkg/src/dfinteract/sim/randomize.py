"""Domain randomization: the six per-episode perturbation dimensions.

Geometry (shape kind + scale), physical properties (mass, friction,
restitution), initial conditions, command jitter, actuation noise, and
perceptual noise on depth scans. Each dimension toggles independently so
ablations flip exactly one flag.
"""

from __future__ import annotations

import numpy as np

from ..geometry import ShapeSpec
from .tasks import NOMINAL_PARAMS, PLATFORM_HALF, SITSTAND


def randomize_geometry(rng: np.random.Generator, profile, allowed_kinds,
                       platform: bool = False, scale_range=None) -> ShapeSpec:
    """Sample shape kind and per-axis scale from the profile.

    The base scale is uniform over the configured range; an optional mild
    anisotropy multiplies the axes by sqrt(a) and 1/sqrt(a) with the ratio
    capped, then clamps back into the range.
    """
    lo, hi = scale_range if scale_range is not None else (profile.scale_lo, profile.scale_hi)
    kinds = list(allowed_kinds)
    kind = kinds[int(rng.integers(len(kinds)))]
    s = float(rng.uniform(lo, hi))
    sx = sy = s
    aniso = getattr(profile, "anisotropy_max", 1.0)
    if aniso > 1.0:
        a = float(rng.uniform(1.0, aniso))
        if rng.random() < 0.5:
            a = 1.0 / a
        r = float(np.sqrt(a))
        sx = float(np.clip(s * r, lo, hi))
        sy = float(np.clip(s / r, lo, hi))
    params = PLATFORM_HALF if platform else NOMINAL_PARAMS[kind]
    if platform:
        kind = "box"
    return ShapeSpec(kind, params, (sx, sy))


def nominal_geometry(kind: str, platform: bool = False,
                     scale: float = 1.0) -> ShapeSpec:
    params = PLATFORM_HALF if platform else NOMINAL_PARAMS[kind]
    return ShapeSpec("box" if platform else kind, params, (scale, scale))


def sample_physics(rng: np.random.Generator, rand_cfg, sim_cfg, enabled: bool):
    """(mass, friction, restitution) for a fresh object."""
    if not enabled:
        return sim_cfg.mass_default, sim_cfg.friction_default, sim_cfg.restitution_default
    return (float(rng.uniform(rand_cfg.mass_lo, rand_cfg.mass_hi)),
            float(rng.uniform(rand_cfg.friction_lo, rand_cfg.friction_hi)),
            float(rng.uniform(rand_cfg.restitution_lo, rand_cfg.restitution_hi)))


def geometry_for_task(task, config, rng):
    """Shape for a task instance under the active profile.

    Priority: explicit task scale pin, then the geometry randomization
    dimension, then nominal scale 1.0.
    """
    platform = task.kind == SITSTAND
    nominal_kind = task.allowed_kinds[0] if task.allowed_kinds else "box"
    if task.scale_override is not None:
        return nominal_geometry(nominal_kind, platform, task.scale_override)
    if config.randomization.geometry:
        return randomize_geometry(rng, config.geometry, task.allowed_kinds,
                                  platform)
    return nominal_geometry(nominal_kind, platform)
