"""Diagonal-Gaussian policy head over an MLP mean network."""

from __future__ import annotations

import math

import numpy as np

from .mlp import mlp_forward
from .params import ParamSet, init_mlp

LOG_STD_MIN = -5.0
LOG_STD_MAX = 1.0
_LOG_2PI = math.log(2.0 * math.pi)


class GaussianPolicy:
    """MLP mean plus a state-independent log-std vector."""

    def __init__(self, mean_net: ParamSet, log_std: np.ndarray):
        self.mean_net = mean_net
        self.log_std = np.clip(np.asarray(log_std, dtype=np.float64),
                               LOG_STD_MIN, LOG_STD_MAX)

    @property
    def obs_dim(self) -> int:
        return self.mean_net.in_dim

    @property
    def action_dim(self) -> int:
        return self.mean_net.out_dim

    def mean(self, obs):
        return mlp_forward(self.mean_net, obs)

    def clamp_log_std(self):
        np.clip(self.log_std, LOG_STD_MIN, LOG_STD_MAX, out=self.log_std)

    def copy(self) -> "GaussianPolicy":
        return GaussianPolicy(self.mean_net.copy(), self.log_std.copy())


def init_policy(obs_dim, hidden, action_dim, rng, log_std_init=-1.6,
                out_scale=0.01) -> GaussianPolicy:
    net = init_mlp(obs_dim, hidden, action_dim, rng, out_scale=out_scale)
    return GaussianPolicy(net, np.full(action_dim, log_std_init))


def gaussian_log_prob(action, mean, log_std) -> np.ndarray:
    """Diagonal-Gaussian log density; batched over leading axis."""
    a = np.atleast_2d(np.asarray(action, dtype=np.float64))
    m = np.atleast_2d(np.asarray(mean, dtype=np.float64))
    inv_var = np.exp(-2.0 * log_std)
    quad = np.sum((a - m) ** 2 * inv_var, axis=1)
    return -0.5 * (quad + np.sum(2.0 * log_std) + a.shape[1] * _LOG_2PI)


def gaussian_entropy(log_std) -> float:
    """Entropy of the diagonal Gaussian (state-independent)."""
    d = len(log_std)
    return float(np.sum(log_std) + 0.5 * d * (1.0 + _LOG_2PI))


def policy_sample(policy: GaussianPolicy, obs, noise):
    """action = mean + exp(log_std) * noise, with its log density.

    Batched when obs/noise carry a leading batch axis.
    """
    mean = policy.mean(obs)
    noise = np.asarray(noise, dtype=np.float64)
    action = mean + np.exp(policy.log_std) * noise
    logp = gaussian_log_prob(action, mean, policy.log_std)
    if np.ndim(obs) == 1:
        return action, float(logp[0])
    return action, logp
