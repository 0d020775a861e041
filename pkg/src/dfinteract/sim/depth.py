"""Planar depth scans: sphere-traced radial ranges in the root frame.

A scan covers the full circle with n_rays directions, rotated by a
per-episode extrinsic offset; perceptual noise adds per-ray Gaussian jitter
and dropout to max_range. History stacking mirrors the interaction window's
repeat-earliest warm-up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError
from ..geometry import Scene
from .world import EnvState

HIT_TOL = 1e-4
RANGE_FLOOR = 1e-6


@dataclass
class DepthObservation:
    """Oldest-first history of radial depth frames."""

    n_rays: int
    frames: list = field(default_factory=list)

    def push(self, frame: np.ndarray, max_frames: int):
        self.frames.append(frame)
        if len(self.frames) > max_frames:
            self.frames.pop(0)


def observe_depth_scan(state: EnvState, n_rays: int | None = None) -> np.ndarray:
    """One noisy scan frame from the current root position."""
    r = state.config.representation
    rand = state.config.randomization
    n = r.n_rays if n_rays is None else int(n_rays)
    if n < 4:
        raise InvalidInputError("depth scan needs at least 4 rays")
    angles = state.depth_extrinsic + (2.0 * math.pi / n) * np.arange(n)
    dirs_x = np.cos(angles)
    dirs_y = np.sin(angles)
    scene = Scene([(o.shape, o.pose) for o in state.objects])
    ranges = scene.depth_scan(state.agent.root.position, dirs_x, dirs_y,
                              r.depth_max_range, HIT_TOL)
    if rand.perception:
        rng = state.rngs["perception"]
        if rand.depth_noise > 0:
            ranges = ranges + rng.normal(0.0, rand.depth_noise, size=n)
        if rand.depth_dropout > 0:
            drop = rng.random(n) < rand.depth_dropout
            ranges = np.where(drop, r.depth_max_range, ranges)
    return np.clip(ranges, RANGE_FLOOR, r.depth_max_range)


def push_depth(state: EnvState) -> np.ndarray:
    """Scan and append to the state's frame history; returns the frame."""
    frame = observe_depth_scan(state)
    state.depth_history.append(frame)
    if len(state.depth_history) > state.config.representation.depth_frames:
        state.depth_history.pop(0)
    return frame
