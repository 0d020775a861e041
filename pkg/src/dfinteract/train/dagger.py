"""DAgger collection and behavior-cloning updates.

The student acts (mean action), the teacher labels every visited state; the
aggregate dataset grows across rounds so the student learns recoveries on
its own state distribution.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError
from ..nn import GaussianPolicy, OptState, adam_step, mlp_forward, mse_loss_and_grad
from .rollout import EnvPool


def collect_dagger(policy: GaussianPolicy | None, pool: EnvPool,
                   steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Roll the student for ``steps`` pool steps; label with the teacher.

    With ``policy=None`` the teacher's own actions are executed (bootstrap
    round). Returns (observations, teacher actions) stacked over env slots.
    """
    obs_out = []
    act_out = []
    for _ in range(steps):
        obs = pool.observations()
        labels = pool.teacher_actions()
        executed = labels if policy is None else mlp_forward(policy.mean_net, obs)
        obs_out.append(obs)
        act_out.append(labels)
        pool.step(np.clip(executed, -1.0, 1.0))
    if not obs_out:
        d_obs = pool.observations().shape[1]
        return np.empty((0, d_obs)), np.empty((0, 6))
    return np.concatenate(obs_out), np.concatenate(act_out)


class AggregateDataset:
    """Ring-buffer dataset over DAgger rounds."""

    def __init__(self, capacity: int, obs_dim: int, act_dim: int):
        self.obs = np.zeros((capacity, obs_dim))
        self.act = np.zeros((capacity, act_dim))
        self.capacity = capacity
        self.size = 0
        self.head = 0

    def add(self, obs: np.ndarray, act: np.ndarray):
        for o, a in zip(obs, act):
            self.obs[self.head] = o
            self.act[self.head] = a
            self.head = (self.head + 1) % self.capacity
            self.size = min(self.size + 1, self.capacity)

    def sample(self, batch: int, rng: np.random.Generator):
        if self.size == 0:
            raise InvalidInputError("dataset is empty")
        idx = rng.integers(self.size, size=batch)
        return self.obs[idx], self.act[idx]


def bc_update(policy: GaussianPolicy, batch, opt: OptState) -> float:
    """One Adam step of action MSE; returns the pre-step loss."""
    obs, labels = batch
    obs = np.atleast_2d(obs)
    if obs.shape[0] == 0:
        raise InvalidInputError("empty batch")
    loss, grad = mse_loss_and_grad(policy.mean_net, obs, labels)
    adam_step(opt, policy.mean_net, grad)
    return loss
