"""Scripted finite-state oracle with privileged state access.

Serves as the demonstration source: proportional-derivative root tracking
of the command path plus phase-dependent effector servoing onto distance
field closest points. Phases run approach -> grip -> track-object (grasp
tasks), approach -> press (push), or plain command following (sitstand and
the sanity task); a lost grasp re-enters approach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..geometry import udf_eval
from ..sim import CARRY, PICKUP, PUSH, SITSTAND, TRACK
from ..sim.tasks import object_command
from ..sim.world import EnvState

ROOT_KP = 25.0
ROOT_KD = 10.0
EFF_KP = 8.0
STAGE_CLEAR = 0.08      # staging standoff outside the surface
PRESS_DEPTH = 0.5       # fraction of the contact shell to sink targets into
OVERHEAD_CLEAR = 0.12
ENGAGE_RADIUS = 0.45    # effectors wait at home until the surface is in range

APPROACH = "approach"
GRIP = "grip"
TRACK_OBJECT = "track_object"
PRESS = "press"
FOLLOW = "follow"


@dataclass
class TeacherContext:
    """Phase machine state; holds grip offsets recorded at attachment and the
    integral term of the push depth regulator."""

    phase: str = APPROACH
    rel_a: np.ndarray | None = None
    rel_b: np.ndarray | None = None
    routed_b: bool = False
    push_bias: float = 0.0

    def reset(self):
        self.phase = APPROACH
        self.rel_a = None
        self.rel_b = None
        self.routed_b = False
        self.push_bias = 0.0


def _root_action(state: EnvState, out: np.ndarray):
    sim = state.config.sim
    task = state.task
    t = state.t
    c = task.root_path.at(t)
    c_dot = (task.root_path.at(t + sim.dt) - c) / sim.dt
    agent = state.agent
    acc = ROOT_KP * (c - agent.root.position) + ROOT_KD * (c_dot - agent.root.velocity)
    out[0:2] = np.clip(acc / sim.root_accel_max, -1.0, 1.0)


def _eff_velocity(state: EnvState, eff_pos, target, out, idx):
    sim = state.config.sim
    v = EFF_KP * (target - eff_pos)
    out[idx:idx + 2] = np.clip(v / sim.effector_vel_max, -1.0, 1.0)


def _side_point(obj, probe):
    """Surface point facing a distant probe (grip/press anchor)."""
    return udf_eval(obj.shape, obj.pose, probe).closest_point


def _home_targets(state: EnvState):
    root = state.agent.root.position
    return root + np.array([-0.2, -0.15]), root + np.array([0.2, -0.15])


def _object_in_range(state: EnvState) -> bool:
    obj = state.active_object
    if obj is None:
        return False
    dx = abs(obj.pose.translation[0] - state.agent.root.position[0])
    return dx - obj.shape.bounding_radius() < ENGAGE_RADIUS


def teacher_action(ctx: TeacherContext, state: EnvState) -> np.ndarray:
    """Privileged-state oracle action (normalized to [-1, 1]^6)."""
    action = np.zeros(6)
    _root_action(state, action)
    task = state.task
    agent = state.agent
    obj = state.active_object

    if task.kind in (SITSTAND, TRACK) or obj is None:
        ctx.phase = FOLLOW
        # keep effectors tucked above the root, clear of the platform
        ta = agent.root.position + np.array([-0.2, 0.1])
        tb = agent.root.position + np.array([0.2, 0.1])
        _eff_velocity(state, agent.eff_a.position, ta, action, 2)
        _eff_velocity(state, agent.eff_b.position, tb, action, 4)
        return action

    eps = state.config.sim.contact_eps
    center = np.asarray(obj.pose.translation)
    brad = obj.shape.bounding_radius()
    w = obj.shape.width()

    if task.kind == PUSH:
        if ctx.phase != PRESS and _object_in_range(state):
            ctx.phase = PRESS
        if ctx.phase != PRESS:
            ta, tb = _home_targets(state)
            _eff_velocity(state, agent.eff_a.position, ta, action, 2)
            _eff_velocity(state, agent.eff_b.position, tb, action, 4)
            return action
        # velocity-matched press: feedforward the command speed and regulate
        # the shell depth; PI action on the tracking error finds the depth
        # where spring force balances the (unknown) sliding friction
        sim = state.config.sim
        cmd = object_command(task, state.t)
        cmd_v = ((object_command(task, state.t + sim.dt) - cmd) / sim.dt
                 if cmd is not None else np.zeros(2))
        err = float(cmd[0] - center[0]) if cmd is not None else 0.0
        ctx.push_bias = min(1.2, max(-0.3, ctx.push_bias + 0.75 * err * sim.dt))
        # cap the depth target inside the shell: a near-boundary press is
        # weaker than sliding friction, so the object still brakes without
        # breaking contact
        phi_target = eps * min(0.95, max(0.1, 0.55 - 2.0 * err - ctx.push_bias))
        # let the object fall back to the command before feeding speed forward
        ff = cmd_v if err > -0.05 else np.zeros(2)
        for idx, dy in ((2, 0.25 * brad), (4, -0.25 * brad)):
            eff = agent.eff_a.position if idx == 2 else agent.eff_b.position
            s = udf_eval(obj.shape, obj.pose, eff)
            outward = float((eff - s.closest_point) @ s.gradient)
            phi = s.distance if outward >= 0.0 else -s.distance
            speed = 8.0 * (phi - phi_target)
            if speed > 0.0:
                # creep through the narrow static-friction band (a few mm):
                # fast approaches spike the damper and dribble the object
                speed = min(speed, 0.06 + 10.0 * max(0.0, phi - 2.0 * eps))
            else:
                speed = max(speed, -1.0)
            v = ff + speed * (-s.gradient)
            v[1] += EFF_KP * (center[1] + dy - eff[1])
            action[idx:idx + 2] = np.clip(v / sim.effector_vel_max, -1.0, 1.0)
        return action

    # grasp tasks: pickup / carry
    if obj.attached and ctx.phase != TRACK_OBJECT:
        ctx.phase = TRACK_OBJECT
        ctx.rel_a = agent.eff_a.position - center
        ctx.rel_b = agent.eff_b.position - center
    if not obj.attached and ctx.phase == TRACK_OBJECT:
        ctx.reset()  # grasp lost: recovery re-approach

    if ctx.phase == TRACK_OBJECT:
        cmd = object_command(task, state.t)
        base = cmd if cmd is not None else center
        _eff_velocity(state, agent.eff_a.position, base + ctx.rel_a, action, 2)
        _eff_velocity(state, agent.eff_b.position, base + ctx.rel_b, action, 4)
        return action

    if ctx.phase == APPROACH and _object_in_range(state):
        ctx.phase = GRIP
        ctx.routed_b = False
    if ctx.phase == APPROACH:
        ta, tb = _home_targets(state)
        _eff_velocity(state, agent.eff_a.position, ta, action, 2)
        _eff_velocity(state, agent.eff_b.position, tb, action, 4)
        return action

    # GRIP: effector A takes the near (left) side, B routes over the top to
    # the far side, then both squeeze into the contact shell until attach
    left = _side_point(obj, center + np.array([-2.0 * w - 0.5, 0.0]))
    right = _side_point(obj, center + np.array([2.0 * w + 0.5, 0.0]))
    overhead = np.array([right[0] + STAGE_CLEAR, center[1] + brad + OVERHEAD_CLEAR])
    if not ctx.routed_b:
        if agent.eff_b.position[0] > right[0] + 0.5 * STAGE_CLEAR:
            ctx.routed_b = True
        else:
            _eff_velocity(state, agent.eff_b.position, overhead, action, 4)
            ta = left + np.array([-STAGE_CLEAR, 0.0])
            _eff_velocity(state, agent.eff_a.position, ta, action, 2)
            return action
    squeeze_a = left + PRESS_DEPTH * eps * np.array([1.0, 0.0])
    if abs(agent.eff_b.position[1] - right[1]) > 0.06:
        # descend outside the far face before squeezing in
        squeeze_b = np.array([right[0] + 0.5 * STAGE_CLEAR, right[1]])
    else:
        squeeze_b = right - PRESS_DEPTH * eps * np.array([1.0, 0.0])
    _eff_velocity(state, agent.eff_a.position, squeeze_a, action, 2)
    _eff_velocity(state, agent.eff_b.position, squeeze_b, action, 4)
    return action
