"""Kinematic (non-physical) reference trajectories.

Used by the no-synthetic ablation: agent links and objects replay scripted
paths directly, bypassing the simulator, the contact model, and the grasp
constraint. The resulting interaction windows carry signatures no physical
rollout can produce (objects moving without being grasped, effectors resting
inside surfaces), which is exactly the data-quality degradation the ablation
studies.
"""

from __future__ import annotations

import numpy as np

from ..geometry import Pose2, Scene, udf_eval
from ..interaction import InteractionWindow, LinkState, extract_feature
from ..sim import TASK_KINDS, make_task, obs_dim
from ..sim.randomize import geometry_for_task
from ..sim.tasks import (CARRY, PICKUP, PUSH, SITSTAND, finalize_task,
                         object_command, rest_height)
from ..sim.observe import COMMAND_LOOKAHEAD, PROP_DIM
from .rewards import AMP_FEATURE_DIM, amp_feature
from .rollout import slot_seed


def _script_effectors(task, t, root, obj_pose, shape):
    """Scripted hand positions: home, then side points, then object-relative."""
    home_a = root + np.array([-0.2, -0.15])
    home_b = root + np.array([0.2, -0.15])
    if task.kind == SITSTAND or shape is None:
        return root + np.array([-0.2, 0.1]), root + np.array([0.2, 0.1])
    center = np.asarray(obj_pose.translation)
    w = shape.width()
    left = center + np.array([-w / 2.0, 0.0])
    right = center + np.array([w / 2.0, 0.0])
    t0 = task.start_time
    if task.kind == PUSH:
        if t < t0 + 2.0:
            return home_a, home_b
        brad = shape.bounding_radius()
        return (left + np.array([0.0, 0.25 * brad]),
                left + np.array([0.0, -0.25 * brad]))
    # pickup / carry
    if t < t0 + 2.5:
        return home_a, home_b
    if t < t0 + 4.0:
        a = (t - (t0 + 2.5)) / 1.5
        return home_a * (1 - a) + left * a, home_b * (1 - a) + right * a
    return left, right


def collect_kinematic_data(config, episodes: int, seed: int,
                           as_bc_dataset: bool = False, vae=None):
    """Windows/motion snippets (or a BC dataset) from pure path playback."""
    rc = config.representation
    dt = config.sim.dt
    windows, amps, flags, kinds = [], [], [], []
    bc_obs, bc_act = [], []
    for ep in range(episodes):
        kind = TASK_KINDS[ep % len(TASK_KINDS)]
        task = make_task(kind, config, scale=1.0)
        rng = np.random.default_rng(slot_seed(seed, 71, ep))
        shape = geometry_for_task(task, config, rng)
        oy = rest_height(shape) if not task.object_static else rest_height(shape)
        pose0 = Pose2((task.nominal_object_x, oy), 0.0)
        task = finalize_task(task, shape, pose0)
        window = InteractionWindow(rc.num_links, rc.window)
        steps = int(round(task.horizon / dt))
        ep_windows, ep_amps = [], []
        prev_frame = None
        prev_action = np.zeros(6)
        for k in range(steps):
            t = task.start_time + k * dt
            root = task.root_path.at(t)
            root_next = task.root_path.at(t + dt)
            root_v = (root_next - root) / dt
            obj_cmd = object_command(task, t)
            obj_pose = Pose2((obj_cmd[0], obj_cmd[1]), 0.0) if obj_cmd is not None else task.object_pose
            eff_a, eff_b = _script_effectors(task, t, root, obj_pose, shape)
            eff_a_n, eff_b_n = _script_effectors(
                task, t + dt, root_next, Pose2(
                    tuple(object_command(task, t + dt)), 0.0)
                if obj_cmd is not None else obj_pose, shape)
            va, vb = (eff_a_n - eff_a) / dt, (eff_b_n - eff_b) / dt
            links = [LinkState(root, root_v), LinkState(eff_a, va),
                     LinkState(eff_b, vb)]
            scene = Scene([(shape, obj_pose)])
            window.push([extract_feature(l, scene.eval(l.position)) for l in links])
            ep_windows.append(window.flatten())
            frame = np.array([root[1], root_v[0], root_v[1],
                              eff_a[0] - root[0], eff_a[1] - root[1],
                              eff_b[0] - root[0], eff_b[1] - root[1],
                              float(np.linalg.norm(va)), float(np.linalg.norm(vb))])
            if prev_frame is not None:
                ep_amps.append(amp_feature(prev_frame, frame))
            prev_frame = frame
            if as_bc_dataset:
                sim = config.sim
                root_nn = task.root_path.at(t + 2 * dt)
                accel = (root_nn - 2 * root_next + root) / (dt * dt)
                action = np.clip(np.concatenate([
                    accel / sim.root_accel_max,
                    va / sim.effector_vel_max,
                    vb / sim.effector_vel_max]), -1.0, 1.0)
                from ..nn import vae_latent
                z = (vae_latent(vae, ep_windows[-1]) if vae is not None
                     else np.zeros(rc.latent_dim))
                cmd_now = task.root_path.at(t)
                cmd_ahead = task.root_path.at(t + COMMAND_LOOKAHEAD)
                o_prop = np.concatenate([root - cmd_now, root_v,
                                         eff_a - root, eff_b - root,
                                         prev_action])
                obs = np.concatenate([o_prop, cmd_now - root, cmd_ahead - root, z])
                bc_obs.append(obs)
                bc_act.append(action)
                prev_action = action
        windows.append(np.asarray(ep_windows))
        amps.append(np.asarray(ep_amps) if ep_amps else np.empty((0, AMP_FEATURE_DIM)))
        flags.append(True)  # playback never fails; that is the point
        kinds.append(kind)
    if as_bc_dataset:
        return np.asarray(bc_obs), np.asarray(bc_act)
    return windows, amps, flags, kinds
