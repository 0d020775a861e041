"""Batched episode collection over independent environments.

Environments are stepped one by one (each owns its state and RNG streams);
networks are evaluated batched across the pool. Episodes auto-reset with
per-slot seed streams so whole runs are reproducible from one base seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..nn import mlp_forward
from ..sim import (FAILURE, RUNNING, SUCCESS, TaskTracker, build_observation,
                   build_vision_observation, push_depth, reset, step)
from ..sim.observe import jittered_command
from ..sim.tasks import object_command
from .rewards import amp_frame
from .teacher import TeacherContext, teacher_action


def slot_seed(base_seed: int, slot: int, episode: int) -> int:
    """Stable per-episode seed derived from (base, slot, episode)."""
    return int(np.random.SeedSequence((base_seed, slot, episode)).generate_state(1)[0])


@dataclass
class StepResult:
    """Per-env outcome of one pool step."""

    reward_inputs: dict
    done: bool          # failure terminal inside the horizon
    truncated: bool     # horizon reached (bootstrap continues)
    final_obs: np.ndarray | None
    episode_status: str | None
    episode_contact_rate: float | None
    episode_kind: str | None = None


class EnvPool:
    """N auto-resetting environments with batched observation assembly."""

    def __init__(self, config, task_fn, base_seed: int, vae=None,
                 vision: bool = False, deviation_rule: bool = False):
        self.config = config
        self.task_fn = task_fn
        self.base_seed = base_seed
        self.vae = vae
        self.vision = vision
        self.deviation_rule = deviation_rule
        self.n = config.training.n_envs
        self.states = [None] * self.n
        self.trackers = [None] * self.n
        self.teacher_ctx = [TeacherContext() for _ in range(self.n)]
        self.episode_idx = [0] * self.n
        self.horizon_steps = [0] * self.n
        self.prev_amp = [None] * self.n
        for i in range(self.n):
            self._spawn(i)

    def _spawn(self, i: int):
        seed = slot_seed(self.base_seed, i, self.episode_idx[i])
        task = self.task_fn(i, self.episode_idx[i])
        state = reset(self.config, task, seed)
        self.states[i] = state
        self.trackers[i] = TaskTracker(state.task, self.config.sim.dt,
                                       self.config.sim.fall_height,
                                       deviation_rule=self.deviation_rule)
        self.teacher_ctx[i].reset()
        self.horizon_steps[i] = int(round(state.task.horizon / self.config.sim.dt))
        self.prev_amp[i] = amp_frame(state)
        self.episode_idx[i] += 1
        if self.vision:
            state.depth_history.clear()
            push_depth(state)

    def _observe(self, state) -> np.ndarray:
        if self.vision:
            return build_vision_observation(state)
        return build_observation(state, self.vae)

    def observations(self) -> np.ndarray:
        return np.stack([self._observe(s) for s in self.states])

    def teacher_actions(self) -> np.ndarray:
        return np.stack([teacher_action(ctx, s)
                         for ctx, s in zip(self.teacher_ctx, self.states)])

    def windows(self) -> np.ndarray:
        return np.stack([s.window.flatten() for s in self.states])

    def step(self, actions: np.ndarray) -> list[StepResult]:
        out = []
        for i in range(self.n):
            state = self.states[i]
            prev_action = state.agent.prev_action.copy()
            _, events = step(state, actions[i])
            obj = state.active_object
            tracker = self.trackers[i]
            status = tracker.update(
                state.t, state.agent.root.position,
                obj.pose if obj else None, obj.shape if obj else None,
                events.contact_any, events.root_platform_contact, events.fell)
            frame = amp_frame(state)
            reward_inputs = {
                "root_pos": state.agent.root.position.copy(),
                "root_cmd": jittered_command(state, state.t),
                "action": np.asarray(actions[i], dtype=np.float64),
                "prev_action": prev_action,
                "fell": events.fell,
                "reach_violations": events.reach_violations,
                "obj_pos": (np.asarray(obj.pose.translation)
                            if obj is not None and state.task.tracked_object() else None),
                "obj_cmd": object_command(state.task, state.t),
                "amp_prev": self.prev_amp[i],
                "amp_frame": frame,
                "contact": events.contact_any,
                "window": (state.window.flatten()
                           if state.objects and state.window.fill else None),
            }
            self.prev_amp[i] = frame
            if self.vision:
                push_depth(state)
            done = status == FAILURE
            truncated = (not done) and state.step_count >= self.horizon_steps[i]
            final_obs = None
            episode_status = None
            contact = None
            kind = None
            if done or truncated:
                final_obs = self._observe(state)
                episode_status = status
                contact = tracker.contact_rate
                kind = state.task.kind
                self._spawn(i)
            out.append(StepResult(reward_inputs, done, truncated, final_obs,
                                  episode_status, contact, kind))
        return out


def run_episode(config, task, seed: int, act_fn, deviation_rule: bool = False,
                on_step=None):
    """Single-episode driver; ``act_fn(state) -> action``; returns the tracker.

    ``on_step(state, action, events)`` observes every transition when given.
    """
    state = reset(config, task, seed)
    tracker = TaskTracker(state.task, config.sim.dt, config.sim.fall_height,
                          deviation_rule=deviation_rule)
    steps = int(round(state.task.horizon / config.sim.dt))
    for _ in range(steps):
        action = act_fn(state)
        _, events = step(state, action)
        obj = state.active_object
        tracker.update(state.t, state.agent.root.position,
                       obj.pose if obj else None, obj.shape if obj else None,
                       events.contact_any, events.root_platform_contact,
                       events.fell)
        if on_step is not None:
            on_step(state, action, events)
        if tracker.status == FAILURE:
            break
    return tracker, state


def teacher_act_fn():
    ctx = TeacherContext()
    return lambda state: teacher_action(ctx, state)


def policy_act_fn(policy, vae):
    """Deterministic (mean-action) policy controller."""
    return lambda state: mlp_forward(policy.mean_net, build_observation(state, vae))


def vision_act_fn(policy):
    return lambda state: mlp_forward(policy.mean_net, build_vision_observation(state))
