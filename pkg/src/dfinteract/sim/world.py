"""Side-view toy physics world.

A kinematic root driven by bounded acceleration, two velocity-commanded
effectors constrained to a reach radius, and primitive objects under gravity
with penalty contacts evaluated directly on the distance field: a contact
shell of width eps activates force k*(eps - dist) along the field gradient,
damped on the normal relative velocity, with Coulomb-capped friction. A
discrete grasp attaches the object to the effector midpoint frame once both
effectors press opposing sides for a few consecutive steps.

Actions are normalized to [-1, 1]^6: root acceleration (2), effector A and B
velocity commands (2 + 2); the config holds the physical scaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError, ResetFailureError
from ..geometry import Pose2, Scene, ShapeSpec, normalize_angle, udf_eval
from ..interaction import InteractionWindow, LinkState, extract_feature
from .randomize import geometry_for_task, sample_physics
from .tasks import (SITSTAND, TRACK, TaskSpec, finalize_task, object_bottom,
                    rest_height)

ACTION_DIM = 6
EFF_HOME = ((-0.2, -0.15), (0.2, -0.15))


@dataclass
class AgentState:
    root: LinkState
    eff_a: LinkState
    eff_b: LinkState
    prev_action: np.ndarray

    def links(self):
        return (self.root, self.eff_a, self.eff_b)


@dataclass
class ObjectState:
    shape: ShapeSpec
    pose: Pose2
    velocity: np.ndarray
    ang_vel: float
    mass: float
    friction: float
    restitution: float
    attached: bool = False
    static: bool = False

    def inertia(self) -> float:
        pa, pb = self.shape.scaled_params()
        if self.shape.kind == "disk":
            return 0.5 * self.mass * pa * pa
        if self.shape.kind == "box":
            return self.mass * (pa * pa + pb * pb) / 3.0
        # capsule approximated by its bounding box
        return self.mass * ((pa + pb) ** 2 + pb * pb) / 3.0


@dataclass
class StepEvents:
    contact_a: bool = False
    contact_b: bool = False
    attach: bool = False
    detach: bool = False
    fell: bool = False
    reach_violations: int = 0
    root_platform_contact: bool = False

    @property
    def contact_any(self) -> bool:
        return self.contact_a or self.contact_b


class EnvState:
    """Everything one episode owns; single writer, seeded RNG streams."""

    def __init__(self, config, task: TaskSpec, agent: AgentState, objects,
                 active_index: int, window: InteractionWindow, rngs: dict):
        self.config = config
        self.task = task
        self.agent = agent
        self.objects: list[ObjectState] = objects
        self.active_index = active_index
        self.window = window
        self.rngs = rngs
        self.t = 0.0
        self.step_count = 0
        self.grasp_count = 0
        self.attach_rel: tuple[float, float, float] | None = None
        self.depth_extrinsic = 0.0
        self.depth_history: list[np.ndarray] = []
        self.command_jitter = np.zeros(2)

    @property
    def active_object(self) -> ObjectState | None:
        if 0 <= self.active_index < len(self.objects):
            return self.objects[self.active_index]
        return None

    def scene(self) -> Scene:
        return Scene([(o.shape, o.pose) for o in self.objects])


def _unit_streams(seed: int):
    names = ("geometry", "physics", "placement", "init", "command",
             "actuation", "perception")
    children = np.random.SeedSequence(seed).spawn(len(names))
    return {n: np.random.default_rng(c) for n, c in zip(names, children)}


def _rest_pose(shape: ShapeSpec, x: float, rotation: float, gap: float) -> Pose2:
    """Center pose placing the lowest boundary point ``gap`` above ground."""
    bottom = object_bottom(shape, Pose2((0.0, 0.0), rotation))
    return Pose2((x, gap - bottom), rotation)


def _overlaps(shape, pose, agent: AgentState, others) -> bool:
    if udf_eval(shape, pose, agent.root.position).distance < 0.12:
        return True
    for eff in (agent.eff_a, agent.eff_b):
        if udf_eval(shape, pose, eff.position).distance < 0.06:
            return True
    for other in others:
        gap = (math.hypot(pose.translation[0] - other.pose.translation[0],
                          pose.translation[1] - other.pose.translation[1])
               - shape.bounding_radius() - other.shape.bounding_radius())
        if gap < 0.02:
            return True
    return False


def _place_object(state_objects, agent, task, shape, config, rng,
                  static: bool) -> Pose2:
    sim = config.sim
    rand = config.randomization
    nominal_x = task.nominal_object_x
    gap = 0.0 if static else max(
        0.0, sim.contact_eps - sim.mass_default * sim.gravity / sim.contact_k)
    for _ in range(100):
        x = nominal_x
        rot = 0.0
        if rand.initial and not static:
            x += float(rng.uniform(-rand.init_pos_jitter, rand.init_pos_jitter))
            rot = float(rng.uniform(-rand.init_rot_jitter, rand.init_rot_jitter))
        pose = _rest_pose(shape, x, rot, gap)
        if not _overlaps(shape, pose, agent, state_objects):
            return pose
    raise ResetFailureError(f"could not place object for task {task.kind}")


def reset(config, task: TaskSpec, seed: int) -> EnvState:
    """Deterministic-for-seed fresh episode with the active randomization."""
    rngs = _unit_streams(seed)
    rand = config.randomization
    rng = rngs["init"]
    jit = rand.init_pos_jitter if rand.initial else 0.0
    start = task.root_path.at(task.start_time)

    def _link(x, y):
        off = rng.uniform(-jit, jit, size=2) if jit > 0 else np.zeros(2)
        return LinkState(np.array([x, y]) + 0.4 * off, np.zeros(2))

    root = _link(start[0], start[1])
    eff_a = _link(start[0] + EFF_HOME[0][0], start[1] + EFF_HOME[0][1])
    eff_b = _link(start[0] + EFF_HOME[1][0], start[1] + EFF_HOME[1][1])
    agent = AgentState(root, eff_a, eff_b, np.zeros(ACTION_DIM))

    objects: list[ObjectState] = []
    active = -1
    if task.kind != TRACK:
        shape = geometry_for_task(task, config, rngs["geometry"])
        static = task.object_static
        pose = _place_object(objects, agent, task, shape, config,
                             rngs["placement"], static)
        mass, fric, rest = sample_physics(rngs["physics"], rand, config.sim,
                                          rand.physics and not static)
        if task.kind == "push":
            mass *= config.sim.push_mass_factor
        objects.append(ObjectState(shape, pose, np.zeros(2), 0.0, mass, fric,
                                   rest, static=static))
        active = 0
        task = finalize_task(task, shape, pose)

    window = InteractionWindow(config.representation.num_links,
                               config.representation.window)
    state = EnvState(config, task, agent, objects, active, window, rngs)
    if rand.perception:
        state.depth_extrinsic = float(
            rngs["perception"].uniform(-rand.depth_extrinsic, rand.depth_extrinsic))
    _push_window(state)
    return state


def _push_window(state: EnvState) -> None:
    if not state.objects:
        return
    scene = state.scene()
    feats = [extract_feature(link, scene.eval(link.position))
             for link in state.agent.links()]
    state.window.push(feats)


def _ground_contacts(obj: ObjectState):
    """World-frame candidate support points (lowest boundary points)."""
    pa, pb = obj.shape.scaled_params()
    cx, cy = obj.pose.translation
    if obj.shape.kind == "disk":
        return [np.array([cx, cy - pa])]
    if obj.shape.kind == "capsule":
        c, s = math.cos(obj.pose.rotation), math.sin(obj.pose.rotation)
        return [np.array([cx - c * pa, cy - s * pa - pb]),
                np.array([cx + c * pa, cy + s * pa - pb])]
    c, s = math.cos(obj.pose.rotation), math.sin(obj.pose.rotation)
    pts = []
    for ex in (-pa, pa):
        for ey in (-pb, pb):
            pts.append(np.array([cx + c * ex - s * ey, cy + s * ex + c * ey]))
    pts.sort(key=lambda p: p[1])
    return pts[:2]


def _point_velocity(obj: ObjectState, point) -> np.ndarray:
    r = point - np.asarray(obj.pose.translation)
    return obj.velocity + obj.ang_vel * np.array([-r[1], r[0]])


def _object_forces(state: EnvState, obj: ObjectState):
    """Penalty contact force and torque from ground and effectors."""
    sim = state.config.sim
    k, c, eps = sim.contact_k, sim.contact_c, sim.contact_eps
    force = np.array([0.0, -sim.gravity * obj.mass])
    torque = 0.0
    center = np.asarray(obj.pose.translation)

    pts = [p for p in _ground_contacts(obj) if p[1] < eps]
    n = len(pts)
    for p in pts:
        vp = _point_velocity(obj, p)
        fn = max(0.0, (k / n) * (eps - p[1]) - (c / n) * vp[1])
        ft = -math.copysign(
            min(obj.friction * fn, (sim.tangent_c / n) * abs(vp[0])), vp[0])
        f = np.array([ft, fn])
        force += f
        r = p - center
        torque += r[0] * f[1] - r[1] * f[0]

    for eff in (state.agent.eff_a, state.agent.eff_b):
        s = udf_eval(obj.shape, obj.pose, eff.position)
        if s.distance >= eps:
            continue
        g = s.gradient
        vp = _point_velocity(obj, s.closest_point)
        v_rel = eff.velocity - vp
        vn = float(v_rel @ g)
        fn = max(0.0, k * (eps - s.distance) - c * vn)
        v_tan = v_rel - vn * g
        tan_speed = float(np.linalg.norm(v_tan))
        f = -fn * g
        if tan_speed > 1e-12:
            f = f + min(obj.friction * fn, sim.tangent_c * tan_speed) * (v_tan / tan_speed)
        force += f
        r = s.closest_point - center
        torque += r[0] * f[1] - r[1] * f[0]
    return force, torque


def _midpoint_frame(agent: AgentState) -> Pose2:
    a, b = agent.eff_a.position, agent.eff_b.position
    mid = 0.5 * (a + b)
    return Pose2((mid[0], mid[1]), math.atan2(b[1] - a[1], b[0] - a[0]))


def _compose(frame: Pose2, rel) -> Pose2:
    c, s = math.cos(frame.rotation), math.sin(frame.rotation)
    x, y, th = rel
    return Pose2((frame.translation[0] + c * x - s * y,
                  frame.translation[1] + s * x + c * y),
                 frame.rotation + th)


def _relative(frame: Pose2, pose: Pose2):
    c, s = math.cos(frame.rotation), math.sin(frame.rotation)
    dx = pose.translation[0] - frame.translation[0]
    dy = pose.translation[1] - frame.translation[1]
    return (c * dx + s * dy, -s * dx + c * dy,
            normalize_angle(pose.rotation - frame.rotation))


def step(state: EnvState, action, dt: float | None = None):
    """Advance one control step; returns (state, StepEvents)."""
    sim = state.config.sim
    dt = sim.dt if dt is None else float(dt)
    a = np.asarray(action, dtype=np.float64)
    if a.shape != (ACTION_DIM,):
        raise InvalidInputError(f"action must have {ACTION_DIM} components")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("action components must be finite")
    a = np.clip(a, -1.0, 1.0)
    rand = state.config.randomization
    if rand.actuation and rand.actuation_noise > 0:
        a = np.clip(a + state.rngs["actuation"].normal(
            0.0, rand.actuation_noise, size=ACTION_DIM), -1.0, 1.0)
    if rand.command and rand.command_jitter > 0:
        # drawn once per step so every consumer sees the same jittered command
        state.command_jitter = state.rngs["command"].uniform(
            -rand.command_jitter, rand.command_jitter, size=2)

    agent = state.agent
    events = StepEvents()

    # kinematic root: bounded acceleration, clamped velocity
    agent.root.velocity = np.clip(agent.root.velocity + a[:2] * sim.root_accel_max * dt,
                                  -sim.root_vel_max, sim.root_vel_max)
    agent.root.position = agent.root.position + agent.root.velocity * dt

    # velocity-driven effectors projected into the reach disk
    for eff, cmd in ((agent.eff_a, a[2:4]), (agent.eff_b, a[4:6])):
        old = eff.position
        new = old + cmd * sim.effector_vel_max * dt
        d = new - agent.root.position
        dist = float(np.linalg.norm(d))
        if dist > sim.reach:
            new = agent.root.position + d * (sim.reach / dist)
            events.reach_violations += 1
        eff.velocity = (new - old) / dt
        eff.position = new

    # object dynamics (attached ones follow the grip frame); free objects are
    # sub-stepped so the penalty springs stay well inside the stability bound
    h = dt / sim.substeps
    for obj in state.objects:
        if obj.static:
            continue
        if obj.attached:
            frame = _midpoint_frame(agent)
            new_pose = _compose(frame, state.attach_rel)
            obj.velocity = (np.asarray(new_pose.translation)
                            - np.asarray(obj.pose.translation)) / dt
            obj.ang_vel = normalize_angle(new_pose.rotation - obj.pose.rotation) / dt
            obj.pose = new_pose
            continue
        inertia = obj.inertia()
        for _ in range(sim.substeps):
            force, torque = _object_forces(state, obj)
            obj.velocity = obj.velocity + (force / obj.mass) * h
            obj.ang_vel = (obj.ang_vel + (torque / inertia) * h) * (
                1.0 - sim.angular_drag * h)
            obj.pose = Pose2((obj.pose.translation[0] + obj.velocity[0] * h,
                              obj.pose.translation[1] + obj.velocity[1] * h),
                             obj.pose.rotation + obj.ang_vel * h)

    # contact flags against the active object
    active = state.active_object
    grad_a = grad_b = None
    if active is not None:
        sa = udf_eval(active.shape, active.pose, agent.eff_a.position)
        sb = udf_eval(active.shape, active.pose, agent.eff_b.position)
        events.contact_a = sa.distance <= sim.contact_eps
        events.contact_b = sb.distance <= sim.contact_eps
        grad_a, grad_b = sa.gradient, sb.gradient
        events.root_platform_contact = (
            udf_eval(active.shape, active.pose, agent.root.position).distance
            <= sim.contact_eps)

    # grasp state machine
    if active is not None and not active.static:
        if active.attached:
            sep = float(np.linalg.norm(agent.eff_b.position - agent.eff_a.position))
            if sep > active.shape.width() + sim.detach_margin:
                active.attached = False
                state.attach_rel = None
                state.grasp_count = 0
                events.detach = True
        else:
            opposing = (events.contact_a and events.contact_b
                        and float(grad_a @ grad_b) < sim.grasp_oppose)
            state.grasp_count = state.grasp_count + 1 if opposing else 0
            if state.grasp_count >= sim.grasp_steps:
                frame = _midpoint_frame(agent)
                state.attach_rel = _relative(frame, active.pose)
                active.attached = True
                events.attach = True

    events.fell = (agent.root.position[1] < sim.fall_height
                   or agent.root.position[1] <= sim.contact_eps)

    agent.prev_action = a
    state.t += dt
    state.step_count += 1
    _push_window(state)
    return state, events


def detach_active(state: EnvState) -> None:
    """Force-release the grasp (used at composed-task boundaries)."""
    obj = state.active_object
    if obj is not None and obj.attached:
        obj.attached = False
        state.attach_rel = None
        state.grasp_count = 0


def spawn_task_object(state: EnvState, task: TaskSpec) -> TaskSpec:
    """Insert the next composed task's object without resetting the world."""
    config = state.config
    detach_active(state)
    if task.kind == TRACK:
        state.task = task
        state.active_index = -1
        return task
    shape = geometry_for_task(task, config, state.rngs["geometry"])
    static = task.object_static
    pose = _place_object(state.objects, state.agent, task, shape, config,
                         state.rngs["placement"], static)
    mass, fric, rest = sample_physics(state.rngs["physics"],
                                      config.randomization, config.sim,
                                      config.randomization.physics and not static)
    if task.kind == "push":
        mass *= config.sim.push_mass_factor
    state.objects.append(ObjectState(shape, pose, np.zeros(2), 0.0, mass, fric,
                                     rest, static=static))
    state.active_index = len(state.objects) - 1
    state.grasp_count = 0
    final = finalize_task(task, shape, pose)
    state.task = final
    return final
