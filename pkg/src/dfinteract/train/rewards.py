"""Composite reward for the discriminative post-training stage.

total = w_root * r_task + w_interact * r_interact + w_style * r_style
      + w_object * r_object
      - w_action * ||da||^2 - w_termination * [fell] - w_limit * n_exceed

r_task is the (negated) root tracking error; the two discriminator terms map
scores through max(0, 1 - 0.25 (D - 1)^2) so they live in [0, 1]; object
tracking is a Gaussian kernel of the object deviation with bandwidth sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..nn import mlp_forward


@dataclass
class RewardWeights:
    root: float = 1.0
    interact: float = 2.0
    style: float = 1.0
    object: float = 1.0
    action: float = 5.0
    termination: float = 10.0
    limit: float = 5.0
    sigma: float = 0.3
    squared_root: bool = False

    @classmethod
    def from_config(cls, train_cfg) -> "RewardWeights":
        return cls(train_cfg.w_root, train_cfg.w_interact, train_cfg.w_style,
                   train_cfg.w_object, train_cfg.w_action,
                   train_cfg.w_termination, train_cfg.w_limit,
                   train_cfg.sigma_obj, train_cfg.squared_root_reward)


@dataclass
class RewardBreakdown:
    r_task: float
    r_interact: float
    r_style: float
    r_object: float
    action_penalty: float
    termination: float
    limit_count: float
    total: float

    def as_dict(self) -> dict:
        return {"task": self.r_task, "interact": self.r_interact,
                "style": self.r_style, "object": self.r_object,
                "action": self.action_penalty, "termination": self.termination,
                "limit": self.limit_count, "total": self.total}


@dataclass
class Transition:
    """Everything one step contributes to the reward."""

    root_pos: np.ndarray
    root_cmd: np.ndarray
    action: np.ndarray
    prev_action: np.ndarray
    fell: bool
    reach_violations: int
    obj_pos: np.ndarray | None = None
    obj_cmd: np.ndarray | None = None
    latent: np.ndarray | None = None
    amp_feature: np.ndarray | None = None


def discriminator_reward(score: float) -> float:
    """max(0, 1 - 0.25 (D - 1)^2): 1 at D=1, 0.75 at D=0, 0 at D=-1."""
    return max(0.0, 1.0 - 0.25 * (score - 1.0) ** 2)


def compute_rewards(transition: Transition, d_aip, d_amp,
                    weights: RewardWeights) -> RewardBreakdown:
    err = transition.root_pos - transition.root_cmd
    dist = float(math.hypot(err[0], err[1]))
    r_task = -(dist * dist) if weights.squared_root else -dist

    r_interact = 0.0
    if d_aip is not None and transition.latent is not None:
        r_interact = discriminator_reward(float(mlp_forward(d_aip, transition.latent)[0]))
    r_style = 0.0
    if d_amp is not None and transition.amp_feature is not None:
        r_style = discriminator_reward(float(mlp_forward(d_amp, transition.amp_feature)[0]))

    r_object = 0.0
    if transition.obj_pos is not None and transition.obj_cmd is not None:
        d2 = float(np.sum((transition.obj_pos - transition.obj_cmd) ** 2))
        r_object = math.exp(-d2 / (weights.sigma * weights.sigma))

    da = transition.action - transition.prev_action
    action_penalty = float(np.sum(da * da))
    termination = 1.0 if transition.fell else 0.0
    limit_count = float(transition.reach_violations)

    total = (weights.root * r_task
             + weights.interact * r_interact
             + weights.style * r_style
             + weights.object * r_object
             - weights.action * action_penalty
             - weights.termination * termination
             - weights.limit * limit_count)
    return RewardBreakdown(r_task, r_interact, r_style, r_object,
                           action_penalty, termination, limit_count, total)


AMP_FRAME_DIM = 9
AMP_FEATURE_DIM = 2 * AMP_FRAME_DIM


def amp_frame(state) -> np.ndarray:
    """Per-step robot-state snapshot for the motion-style discriminator:
    root height, root velocity, effector offsets, effector speeds."""
    agent = state.agent
    da = agent.eff_a.position - agent.root.position
    db = agent.eff_b.position - agent.root.position
    return np.array([
        agent.root.position[1],
        agent.root.velocity[0], agent.root.velocity[1],
        da[0], da[1], db[0], db[1],
        float(np.linalg.norm(agent.eff_a.velocity)),
        float(np.linalg.norm(agent.eff_b.velocity)),
    ])


def amp_feature(prev_frame: np.ndarray, frame: np.ndarray) -> np.ndarray:
    """Two consecutive frames, chronological order."""
    return np.concatenate([prev_frame, frame])
