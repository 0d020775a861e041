"""Task definitions: command trajectories, thresholds, and status tracking.

Four task analogs plus a no-object root-tracking sanity task:

  pickup   lift the object clear of the ground with a two-effector grasp
  sitstand settle the root onto a static platform inside a height band
  push     translate the object while keeping effector contact
  carry    grasp, transport along a path, hold at the destination
  track    drive the root to a commanded point (no objects)

Success thresholds follow the evaluation protocol: pickup requires the
object bottom above 0.3 held for 3 s; sitstand a root height inside
[0.3, 0.6] with platform contact held for 2 s; carry and composed sequences
fail the moment root or tracked-object deviation exceeds 0.6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError
from ..geometry import BOX, Pose2, ShapeSpec, udf_eval

PICKUP = "pickup"
SITSTAND = "sitstand"
PUSH = "push"
CARRY = "carry"
TRACK = "track"
TASK_KINDS = (PICKUP, SITSTAND, PUSH, CARRY)

PICKUP_HEIGHT = 0.3
PICKUP_HOLD = 3.0
SIT_BAND = (0.3, 0.6)
SIT_HOLD = 2.0
DEVIATION_LIMIT = 0.6

ROOT_HOME = (0.0, 0.55)
OBJECT_X = 1.1
STANDOFF = 0.35
PUSH_STANDOFF = 0.5
LIFT_Y = 0.75

# nominal unscaled shapes per task (box analogs of the real objects)
NOMINAL_PARAMS = {
    "box": (0.16, 0.12),
    "disk": (0.13,),
    "capsule": (0.10, 0.09),
}
PLATFORM_HALF = (0.25, 0.225)  # platform top sits at 0.45 * vertical scale


class PiecewisePath:
    """Piecewise-linear 2D path over time; holds endpoints outside the span."""

    def __init__(self, waypoints):
        if not waypoints:
            raise InvalidInputError("path needs at least one waypoint")
        self.times = np.array([w[0] for w in waypoints], dtype=np.float64)
        self.points = np.array([[w[1], w[2]] for w in waypoints], dtype=np.float64)
        if np.any(np.diff(self.times) < 0):
            raise InvalidInputError("waypoint times must be non-decreasing")

    @property
    def end_time(self) -> float:
        return float(self.times[-1])

    def at(self, t: float) -> np.ndarray:
        if t <= self.times[0]:
            return self.points[0].copy()
        if t >= self.times[-1]:
            return self.points[-1].copy()
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        t0, t1 = self.times[i], self.times[i + 1]
        if t1 == t0:
            return self.points[i + 1].copy()
        a = (t - t0) / (t1 - t0)
        return (1.0 - a) * self.points[i] + a * self.points[i + 1]

    def shifted(self, dt: float, dx: float, dy: float) -> "PiecewisePath":
        wps = [(t + dt, p[0] + dx, p[1] + dy)
               for t, p in zip(self.times, self.points)]
        return PiecewisePath(wps)


@dataclass
class TaskSpec:
    """One concrete task instance: command paths plus its object, if any.

    ``shape`` is None until geometry is drawn (reset samples it from the
    randomization profile); ``finalized`` specs carry concrete paths.
    """

    kind: str
    horizon: float
    root_path: PiecewisePath
    object_path: PiecewisePath | None = None
    shape: ShapeSpec | None = None
    object_pose: Pose2 | None = None
    object_static: bool = False
    allowed_kinds: tuple[str, ...] = ("box",)
    scale_override: float | None = None
    start_time: float = 0.0
    nominal_object_x: float = 0.0

    def tracked_object(self) -> bool:
        return self.object_path is not None


def nominal_shape(kind: str, scale: float = 1.0) -> ShapeSpec:
    return ShapeSpec(kind, NOMINAL_PARAMS[kind], (scale, scale))


def rest_height(shape: ShapeSpec) -> float:
    """Center height at which the shape's lowest point touches the ground."""
    pa, pb = shape.scaled_params()
    if shape.kind == "box":
        return pb
    if shape.kind == "disk":
        return pa
    return pb  # capsule lying along x


def make_task(kind: str, config, scale: float | None = None,
              start=ROOT_HOME, start_time: float = 0.0,
              object_x: float | None = None) -> TaskSpec:
    """Build a task template anchored at ``start``; geometry stays unsampled
    unless ``scale`` pins it (evaluation sweeps pin the scale)."""
    sx, sy = float(start[0]), float(start[1])
    t0 = float(start_time)
    ox = sx + (OBJECT_X if object_x is None else object_x)
    g = config.geometry
    if kind == PICKUP:
        root = PiecewisePath([(t0, sx, sy), (t0 + 0.5, sx, sy),
                              (t0 + 3.0, ox - STANDOFF, 0.55),
                              (t0 + 12.0, ox - STANDOFF, 0.55)])
        return TaskSpec(PICKUP, 12.0, root, allowed_kinds=g.pickup_kinds,
                        scale_override=scale, start_time=t0, nominal_object_x=ox)
    if kind == SITSTAND:
        s = 1.0 if scale is None else scale
        top = 2.0 * PLATFORM_HALF[1] * s
        root = PiecewisePath([(t0, sx, sy), (t0 + 3.0, ox, 0.55),
                              (t0 + 4.5, ox, top + 0.015),
                              (t0 + 8.5, ox, top + 0.015),
                              (t0 + 10.0, ox, 0.55), (t0 + 11.0, ox, 0.55)])
        return TaskSpec(SITSTAND, 11.0, root, allowed_kinds=g.sit_kinds,
                        object_static=True, scale_override=scale, start_time=t0,
                        nominal_object_x=ox)
    if kind == PUSH:
        root = PiecewisePath([(t0, sx, sy),
                              (t0 + 2.0, ox - PUSH_STANDOFF, 0.55),
                              (t0 + 10.5, ox - PUSH_STANDOFF + 1.0, 0.55),
                              (t0 + 12.0, ox - PUSH_STANDOFF + 1.0, 0.55)])
        return TaskSpec(PUSH, 12.0, root, allowed_kinds=g.push_kinds,
                        scale_override=scale, start_time=t0, nominal_object_x=ox)
    if kind == CARRY:
        root = PiecewisePath([(t0, sx, sy), (t0 + 3.0, ox - STANDOFF, 0.55),
                              (t0 + 7.5, ox - STANDOFF, 0.55),
                              (t0 + 13.0, ox - STANDOFF + 1.5, 0.55),
                              (t0 + 16.0, ox - STANDOFF + 1.5, 0.55)])
        return TaskSpec(CARRY, 16.0, root, allowed_kinds=g.carry_kinds,
                        scale_override=scale, start_time=t0, nominal_object_x=ox)
    raise InvalidInputError(f"unknown task kind {kind!r}")


def make_track_task(target, start=ROOT_HOME, start_time: float = 0.0,
                    horizon: float = 5.0) -> TaskSpec:
    """No-object sanity task: reach and hold a commanded root point."""
    t0 = float(start_time)
    root = PiecewisePath([(t0, start[0], start[1]),
                          (t0 + 2.5, target[0], target[1]),
                          (t0 + horizon, target[0], target[1])])
    return TaskSpec(TRACK, horizon, root, allowed_kinds=())


def finalize_task(task: TaskSpec, shape: ShapeSpec, object_pose: Pose2) -> TaskSpec:
    """Pin sampled geometry and derive the object command path from it."""
    t0 = task.start_time
    ox, oy = object_pose.translation
    obj_path = None
    root_path = task.root_path
    if task.kind == SITSTAND:
        # the descent depth follows the sampled platform height
        top = object_pose.translation[1] + shape.scaled_params()[1]
        start = root_path.at(t0)
        root_path = PiecewisePath([
            (t0, start[0], start[1]), (t0 + 3.0, ox, 0.55),
            (t0 + 4.5, ox, top + 0.015), (t0 + 8.5, ox, top + 0.015),
            (t0 + 10.0, ox, 0.55), (t0 + 11.0, ox, 0.55)])
        return TaskSpec(task.kind, task.horizon, root_path, None, shape,
                        object_pose, task.object_static, task.allowed_kinds,
                        task.scale_override, t0, task.nominal_object_x)
    if task.kind == PICKUP:
        obj_path = PiecewisePath([(t0, ox, oy), (t0 + 5.0, ox, oy),
                                  (t0 + 7.0, ox, LIFT_Y), (t0 + 12.0, ox, LIFT_Y)])
    elif task.kind == PUSH:
        obj_path = PiecewisePath([(t0, ox, oy), (t0 + 2.5, ox, oy),
                                  (t0 + 10.5, ox + 1.0, oy), (t0 + 12.0, ox + 1.0, oy)])
    elif task.kind == CARRY:
        obj_path = PiecewisePath([(t0, ox, oy), (t0 + 5.0, ox, oy),
                                  (t0 + 7.0, ox, LIFT_Y), (t0 + 7.5, ox, LIFT_Y),
                                  (t0 + 13.0, ox + 1.5, LIFT_Y),
                                  (t0 + 16.0, ox + 1.5, LIFT_Y)])
    return TaskSpec(task.kind, task.horizon, root_path, obj_path, shape,
                    object_pose, task.object_static, task.allowed_kinds,
                    task.scale_override, t0, task.nominal_object_x)


def root_command(task: TaskSpec, t: float, noise_profile=None, rng=None) -> np.ndarray:
    """Sample the root command, with bounded jitter when the profile asks.

    Outside the horizon the final waypoint holds. Jitter is uniform in
    [-bound, bound] per axis, so it can never exceed the configured bound.
    """
    c = task.root_path.at(t)
    if noise_profile is not None and getattr(noise_profile, "command", False) and rng is not None:
        bound = noise_profile.command_jitter
        c = c + rng.uniform(-bound, bound, size=2)
    return c


def object_command(task: TaskSpec, t: float) -> np.ndarray | None:
    if task.object_path is None:
        return None
    return task.object_path.at(t)


def object_bottom(shape: ShapeSpec, pose: Pose2) -> float:
    """World height of the shape's lowest boundary point."""
    pa, pb = shape.scaled_params()
    c, s = math.cos(pose.rotation), math.sin(pose.rotation)
    y = pose.translation[1]
    if shape.kind == "disk":
        return y - pa
    if shape.kind == "box":
        return y - (abs(s * pa) + abs(c * pb))
    return y - (abs(s) * pa + pb)


RUNNING = "running"
SUCCESS = "success"
FAILURE = "failure"


class TaskTracker:
    """Incremental task-status evaluation over a rolling episode.

    For composed sequences, ``deviation_rule`` applies the 0.6 trajectory
    tolerance to every task kind (the long-horizon criterion); single-task
    evaluation keeps each kind's own success test.
    """

    def __init__(self, task: TaskSpec, dt: float, fall_height: float = 0.1,
                 deviation_rule: bool = False):
        self.task = task
        self.dt = dt
        self.fall_height = fall_height
        self.deviation_rule = deviation_rule or task.kind == CARRY
        self.hold = 0.0
        self.status = RUNNING
        self.contact_steps = 0
        self.steps = 0

    def update(self, t, root_pos, object_pose, object_shape, contact_any,
               root_platform_contact=False, fell=False) -> str:
        if self.status != RUNNING:
            return self.status
        self.steps += 1
        if contact_any:
            self.contact_steps += 1
        if fell or root_pos[1] < self.fall_height:
            self.status = FAILURE
            return self.status
        task = self.task
        if self.deviation_rule:
            c = task.root_path.at(t)
            if math.hypot(root_pos[0] - c[0], root_pos[1] - c[1]) > DEVIATION_LIMIT:
                self.status = FAILURE
                return self.status
            target = object_command(task, t)
            if target is not None and object_pose is not None:
                dx = object_pose.translation[0] - target[0]
                dy = object_pose.translation[1] - target[1]
                if math.hypot(dx, dy) > DEVIATION_LIMIT:
                    self.status = FAILURE
                    return self.status
        if task.kind == PICKUP and object_pose is not None:
            if object_bottom(object_shape, object_pose) > PICKUP_HEIGHT:
                self.hold += self.dt
                if self.hold >= PICKUP_HOLD:
                    self.status = SUCCESS
            else:
                self.hold = 0.0
        elif task.kind == SITSTAND:
            in_band = SIT_BAND[0] <= root_pos[1] <= SIT_BAND[1]
            if root_platform_contact and in_band:
                self.hold += self.dt
                if self.hold >= SIT_HOLD:
                    self.status = SUCCESS
            else:
                self.hold = 0.0
        elif task.kind == CARRY:
            if t >= task.start_time + 14.0:
                self.status = SUCCESS
        elif task.kind == TRACK:
            c = task.root_path.at(t)
            err = math.hypot(root_pos[0] - c[0], root_pos[1] - c[1])
            if t >= task.start_time + task.horizon - 1.0 and err <= 0.15:
                self.hold += self.dt
                if self.hold >= 0.5:
                    self.status = SUCCESS
            elif t >= task.start_time + task.horizon - 1.0:
                self.hold = 0.0
        return self.status

    @property
    def contact_rate(self) -> float:
        return self.contact_steps / max(1, self.steps)


def task_status(tracker: TaskTracker) -> str:
    """Current status of an incrementally updated tracker."""
    return tracker.status
