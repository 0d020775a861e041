"""Clipped-surrogate policy optimization with exact gradients.

The policy is a Gaussian head over an MLP mean; gradients of the clipped
surrogate, entropy bonus, and value regression are hand-derived and checked
against finite differences in the test suite.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidInputError, StaleBatchError
from ..nn import (GaussianPolicy, OptState, ParamSet, adam_step,
                  adam_step_array, mlp_backward, mlp_forward,
                  mlp_forward_cached)

_LOG_2PI = math.log(2.0 * math.pi)


def gae_advantages(rewards, values, gamma: float, lam: float,
                   dones=None, bootstrap=0.0) -> np.ndarray:
    """Generalized advantage estimation along axis 0.

    ``dones`` marks failure terminals (no value beyond); ``bootstrap`` is the
    value of the state after the last step (pass 0 for terminal ends). Works
    on (T,) vectors or (T, N) batches; returns raw, unnormalized advantages.
    """
    r = np.asarray(rewards, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if r.shape != v.shape:
        raise InvalidInputError("rewards/values shapes differ")
    if dones is None:
        dones = np.zeros_like(r, dtype=bool)
    nonterm = 1.0 - np.asarray(dones, dtype=np.float64)
    adv = np.zeros_like(r)
    next_v = np.broadcast_to(np.asarray(bootstrap, dtype=np.float64), r[0].shape).copy() \
        if r.ndim > 1 else float(bootstrap)
    next_a = np.zeros_like(r[0]) if r.ndim > 1 else 0.0
    for t in range(len(r) - 1, -1, -1):
        delta = r[t] + gamma * next_v * nonterm[t] - v[t]
        next_a = delta + gamma * lam * nonterm[t] * next_a
        adv[t] = next_a
        next_v = v[t]
    return adv


def policy_loss_and_grads(policy: GaussianPolicy, obs, actions, logp_old,
                          advantages, clip: float, entropy_coef: float,
                          stale_check: bool = True):
    """Clipped surrogate + entropy bonus; returns (stats, net grad, log_std grad).

    With ``stale_check`` (the first pass over a fresh batch), stored log-probs
    disagreeing with the current policy by more than 10 nats raise
    StaleBatchError: the batch came from a different policy. Later epochs
    legitimately drift and skip the check.
    """
    obs = np.atleast_2d(obs)
    actions = np.atleast_2d(actions)
    m = obs.shape[0]
    mean, cache = mlp_forward_cached(policy.mean_net, obs)
    log_std = policy.log_std
    inv_var = np.exp(-2.0 * log_std)
    diff = actions - mean
    quad = np.sum(diff * diff * inv_var, axis=1)
    logp_new = -0.5 * (quad + np.sum(2.0 * log_std) + actions.shape[1] * _LOG_2PI)
    if stale_check:
        gap = np.max(np.abs(logp_new - logp_old))
        if gap > 10.0:
            raise StaleBatchError(f"log-prob mismatch {gap:.2f} > 10")
    ratio = np.exp(logp_new - logp_old)
    surr_un = ratio * advantages
    surr_cl = np.clip(ratio, 1.0 - clip, 1.0 + clip) * advantages
    loss_pi = -float(np.mean(np.minimum(surr_un, surr_cl)))
    # gradient flows through the ratio only where the unclipped branch is
    # active (the min picks it, or both branches are equal inside the clip)
    active = (surr_un <= surr_cl).astype(np.float64)
    d_logp = -(active * ratio * advantages) / m
    d_mean = d_logp[:, None] * (diff * inv_var)
    grad_net, _ = mlp_backward(policy.mean_net, cache, d_mean)
    d_log_std = d_logp @ (diff * diff * inv_var - 1.0)
    entropy = float(np.sum(log_std) + 0.5 * len(log_std) * (1.0 + _LOG_2PI))
    d_log_std -= entropy_coef  # maximize entropy
    clip_frac = float(np.mean((np.abs(ratio - 1.0) > clip).astype(np.float64)))
    stats = {"pi_loss": loss_pi, "entropy": entropy, "clip_frac": clip_frac,
             "approx_kl": float(np.mean(logp_old - logp_new))}
    return stats, grad_net, d_log_std


def value_loss_and_grad(value_net: ParamSet, obs, returns):
    obs = np.atleast_2d(obs)
    pred, cache = mlp_forward_cached(value_net, obs)
    err = pred[:, 0] - np.asarray(returns, dtype=np.float64)
    loss = float(np.mean(err * err))
    grad, _ = mlp_backward(value_net, cache, (2.0 / len(err)) * err[:, None])
    return loss, grad


def clip_grad_norm(grad: np.ndarray, max_norm: float) -> np.ndarray:
    norm = float(np.linalg.norm(grad))
    if norm > max_norm:
        grad = grad * (max_norm / norm)
    return grad


def ppo_update(policy: GaussianPolicy, value_net: ParamSet, batch: dict,
               opt_policy: OptState, opt_log_std: OptState,
               opt_value: OptState, cfg, rng: np.random.Generator) -> dict:
    """Epochs of minibatch updates on one rollout batch.

    ``batch`` holds obs, actions, logp, advantages, returns (flat arrays).
    Advantages are normalized per batch here and clipped against outliers;
    gradients are norm-clipped so a hot minibatch cannot yank the policy.
    """
    obs = batch["obs"]
    n = obs.shape[0]
    adv = batch["advantages"]
    adv = (adv - adv.mean()) / (adv.std() + 1e-8)
    adv = np.clip(adv, -5.0, 5.0)
    # freshness gate once, before any parameter moves
    policy_loss_and_grads(policy, obs, batch["actions"], batch["logp"], adv,
                          cfg.clip, cfg.entropy_coef, stale_check=True)
    stats = {}
    halted = False
    for epoch in range(cfg.ppo_epochs):
        order = rng.permutation(n)
        for start in range(0, n, cfg.minibatch):
            idx = order[start:start + cfg.minibatch]
            stats, g_net, g_std = policy_loss_and_grads(
                policy, obs[idx], batch["actions"][idx], batch["logp"][idx],
                adv[idx], cfg.clip, cfg.entropy_coef, stale_check=False)
            if stats["approx_kl"] > cfg.kl_stop:
                halted = True  # the batch no longer reflects the policy
            adam_step(opt_policy, policy.mean_net,
                      clip_grad_norm(g_net, cfg.grad_clip))
            adam_step_array(opt_log_std, policy.log_std,
                            clip_grad_norm(g_std, cfg.grad_clip))
            policy.clamp_log_std()
            v_loss, g_v = value_loss_and_grad(value_net, obs[idx],
                                              batch["returns"][idx])
            adam_step(opt_value, value_net,
                      clip_grad_norm(cfg.value_coef * g_v, 10.0 * cfg.grad_clip))
            stats["v_loss"] = v_loss
            if halted:
                break
        if halted:
            break
    return stats


def value_of(value_net: ParamSet, obs) -> np.ndarray:
    out = mlp_forward(value_net, obs)
    return out[..., 0]
