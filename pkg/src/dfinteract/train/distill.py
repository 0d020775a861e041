"""Stage 3: DAgger distillation into the depth-scan student.

The student observes proprioception, the command block, and a stacked
history of noisy radial depth frames; the frozen stage-2 policy labels every
state it visits from the privileged observation. Perceptual randomization
stays active throughout collection.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError
from ..nn import (GaussianPolicy, OptState, init_policy, mlp_forward,
                  mse_loss_and_grad, adam_step)
from ..sim import build_observation, vision_obs_dim
from .dagger import AggregateDataset
from .rollout import EnvPool, slot_seed
from .stages import MetricsLog, task_sampler


def distill_update(student: GaussianPolicy, batch, opt: OptState) -> float:
    """One Adam step of action MSE against frozen-teacher labels."""
    obs, labels = batch
    obs = np.atleast_2d(obs)
    if obs.shape[0] == 0:
        raise InvalidInputError("empty batch")
    loss, grad = mse_loss_and_grad(student.mean_net, obs, labels)
    adam_step(opt, student.mean_net, grad)
    return loss


def collect_distill(student: GaussianPolicy | None, teacher: GaussianPolicy,
                    vae, pool: EnvPool, steps: int):
    """Student rolls out on vision observations; teacher labels from the
    privileged base observation of the same states."""
    obs_out, act_out = [], []
    for _ in range(steps):
        obs_vis = pool.observations()
        obs_base = np.stack([build_observation(s, vae) for s in pool.states])
        labels = mlp_forward(teacher.mean_net, obs_base)
        executed = labels if student is None else mlp_forward(student.mean_net, obs_vis)
        obs_out.append(obs_vis)
        act_out.append(labels)
        pool.step(np.clip(executed, -1.0, 1.0))
    return np.concatenate(obs_out), np.concatenate(act_out)


def distill_stage(config, vae, teacher: GaussianPolicy, seed: int,
                  log: MetricsLog | None = None) -> GaussianPolicy:
    log = log or MetricsLog()
    tc = config.training
    rng = np.random.default_rng(slot_seed(seed, 73, 0))
    d_vis = vision_obs_dim(config)
    student = init_policy(d_vis, tuple(tc.student_hidden), 6, rng)
    opt = OptState.for_params(student.mean_net, tc.lr_distill)
    pool = EnvPool(config, task_sampler(config, salt=seed + 2),
                   base_seed=slot_seed(seed, 79, 0), vae=vae, vision=True)
    data = AggregateDataset(100_000, d_vis, 6)
    grad_steps = 0
    warmup = True
    while grad_steps < tc.distill_steps:
        obs, labels = collect_distill(None if warmup else student, teacher,
                                      vae, pool, 8)
        warmup = grad_steps < tc.distill_steps // 4
        data.add(obs, labels)
        for _ in range(64):
            loss = distill_update(student, data.sample(tc.distill_batch, rng), opt)
            grad_steps += 1
            if grad_steps >= tc.distill_steps:
                break
        if grad_steps % 6400 < 64:
            log.write(stage="distill", step=grad_steps, loss=loss)
    return student
