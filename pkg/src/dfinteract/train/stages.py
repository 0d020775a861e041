"""The three training stages plus the no-object RL sanity task.

Stage 0 collects teacher rollouts, trains the window VAE once, and freezes
it together with the reference buffers. Stage 1 clones the teacher with
DAgger under the inference observation. Stage 2 fine-tunes with PPO under
geometry randomization, rewarded by the composite of command tracking and
the two adversarial priors. Stage 3 distills the result into a depth-scan
student. Ablation variants flip exactly one config field each.
"""

from __future__ import annotations

import json
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from ..config import Config
from ..errors import InvalidInputError
from ..nn import (GaussianPolicy, OptState, adam_step, init_mlp, init_policy,
                  init_vae, load_checkpoint, mlp_forward, policy_sample,
                  save_checkpoint, vae_latent, vae_loss_and_grad)
from ..sim import (PICKUP, SUCCESS, TASK_KINDS, make_task, make_track_task,
                   obs_dim, vision_obs_dim)
from ..sim.observe import PROP_DIM
from .aip import ReferenceBuffer, aip_update, build_ref_buffer
from .dagger import AggregateDataset, bc_update, collect_dagger
from .kinematic import collect_kinematic_data
from .ppo import gae_advantages, ppo_update, value_loss_and_grad, value_of
from .rewards import (AMP_FEATURE_DIM, RewardWeights, Transition, amp_feature,
                      compute_rewards)
from .rollout import EnvPool, run_episode, slot_seed, teacher_act_fn
from .teacher import TeacherContext, teacher_action

PUSH_QUAL_RATE = 0.45  # push counts as a successful demonstration above this


class MetricsLog:
    """Line-delimited JSON metrics stream."""

    def __init__(self, path=None):
        self._fh = open(path, "w") if path else None

    def write(self, **fields):
        if self._fh:
            self._fh.write(json.dumps(fields, sort_keys=True) + "\n")
            self._fh.flush()

    def close(self):
        if self._fh:
            self._fh.close()


def episode_success(kind: str, status: str, contact_rate: float) -> bool:
    if kind == "push":
        return status != "failure" and contact_rate >= PUSH_QUAL_RATE
    return status == SUCCESS


def task_sampler(config, kinds=TASK_KINDS, scale=None, salt: int = 0):
    """Deterministic per-slot task factory cycling the kinds pseudo-randomly."""

    def fn(slot: int, episode: int):
        rng = np.random.default_rng(slot_seed(salt + 7919, slot, episode))
        kind = kinds[int(rng.integers(len(kinds)))]
        return make_task(kind, config, scale=scale)

    return fn


def qualify_teacher(config, episodes: int = 200, seed: int = 0,
                    scale: float = 1.0) -> dict:
    """Success fraction of the scripted oracle per task at a pinned scale."""
    out = {}
    for kind in TASK_KINDS:
        ok = 0
        for ep in range(episodes):
            task = make_task(kind, config, scale=scale)
            tracker, _ = run_episode(config, task,
                                     slot_seed(seed, hash(kind) % 997, ep),
                                     teacher_act_fn())
            ok += episode_success(kind, tracker.status, tracker.contact_rate)
        out[kind] = ok / episodes
    return out


def collect_teacher_data(config, episodes: int, seed: int):
    """Teacher rollouts at nominal geometry: per-episode window vectors, motion
    snippets, and the qualification flag."""
    windows, amps, flags, kinds = [], [], [], []
    for ep in range(episodes):
        kind = TASK_KINDS[ep % len(TASK_KINDS)]
        task = make_task(kind, config, scale=1.0)
        ep_windows, ep_amps = [], []
        prev = {"frame": None}

        def on_step(state, action, events):
            if state.objects and state.window.fill:
                ep_windows.append(state.window.flatten())
            frame = amp_frame_of(state)
            if prev["frame"] is not None:
                ep_amps.append(amp_feature(prev["frame"], frame))
            prev["frame"] = frame

        tracker, _ = run_episode(config, task, slot_seed(seed, 13, ep),
                                 teacher_act_fn(), on_step=on_step)
        windows.append(np.asarray(ep_windows) if ep_windows else np.empty((0, 0)))
        amps.append(np.asarray(ep_amps) if ep_amps else np.empty((0, AMP_FEATURE_DIM)))
        flags.append(episode_success(kind, tracker.status, tracker.contact_rate))
        kinds.append(kind)
    return windows, amps, flags, kinds


def amp_frame_of(state):
    from .rewards import amp_frame
    return amp_frame(state)


def train_vae_stage(config: Config, seed: int, log: MetricsLog | None = None):
    """Stage 0: teacher data, VAE training, frozen reference buffers."""
    log = log or MetricsLog()
    tc = config.training
    rc = config.representation
    if tc.use_synthetic:
        windows, amps, flags, _ = collect_teacher_data(config, tc.ref_episodes, seed)
    else:
        windows, amps, flags, _ = collect_kinematic_data(config, tc.ref_episodes, seed)
    all_windows = np.concatenate([w for w in windows if w.size], axis=0)
    rng = np.random.default_rng(slot_seed(seed, 29, 0))
    vae = init_vae(all_windows.shape[1], rc.latent_dim, tuple(rc.vae_hidden),
                   rc.vae_beta, rng)
    opt_e = OptState.for_params(vae.encoder, tc.lr_vae)
    opt_d = OptState.for_params(vae.decoder, tc.lr_vae)
    for it in range(tc.vae_steps):
        idx = rng.integers(all_windows.shape[0], size=tc.vae_batch)
        batch = all_windows[idx]
        noise = rng.standard_normal((tc.vae_batch, rc.latent_dim))
        loss, (ge, gd) = vae_loss_and_grad(vae, batch, noise)
        adam_step(opt_e, vae.encoder, ge)
        adam_step(opt_d, vae.decoder, gd)
        if it % 200 == 0:
            log.write(stage="vae", step=it, loss=loss)
    ref = build_ref_buffer(windows, flags, vae, tc.ref_capacity,
                           seed=slot_seed(seed, 31, 0))
    amp_ref = ReferenceBuffer(tc.ref_capacity, AMP_FEATURE_DIM,
                              seed=slot_seed(seed, 37, 0))
    for ep_amps, ok in zip(amps, flags):
        if ok and len(ep_amps):
            amp_ref.extend(ep_amps)
    return vae, ref, amp_ref


def train_bc_stage(config: Config, vae, seed: int,
                   log: MetricsLog | None = None) -> GaussianPolicy:
    """Stage 1: DAgger behavior cloning at nominal geometry."""
    log = log or MetricsLog()
    tc = config.training
    rng = np.random.default_rng(slot_seed(seed, 41, 0))
    d_obs = obs_dim(config)
    policy = init_policy(d_obs, tuple(tc.policy_hidden), 6, rng)
    opt = OptState.for_params(policy.mean_net, tc.lr_pretrain)
    if tc.use_synthetic:
        pool = EnvPool(config, task_sampler(config, scale=1.0, salt=seed),
                       base_seed=slot_seed(seed, 43, 0), vae=vae)
        data = AggregateDataset(100_000, d_obs, 6)
        grad_steps = 0
        warmup = True
        while grad_steps < tc.bc_steps:
            obs, labels = collect_dagger(None if warmup else policy, pool, 8)
            warmup = grad_steps < tc.bc_steps // 4
            data.add(obs, labels)
            for _ in range(64):
                loss = bc_update(policy, data.sample(tc.bc_batch, rng), opt)
                grad_steps += 1
                if grad_steps >= tc.bc_steps:
                    break
            if grad_steps % 3200 < 64:
                log.write(stage="bc", step=grad_steps, loss=loss)
    else:
        # physically invalid reference data cannot be queried at visited
        # states: plain cloning of the scripted kinematic dataset
        obs, labels = collect_kinematic_data(config, tc.ref_episodes, seed,
                                             as_bc_dataset=True, vae=vae)
        for grad_steps in range(tc.bc_steps):
            idx = rng.integers(obs.shape[0], size=tc.bc_batch)
            loss = bc_update(policy, (obs[idx], labels[idx]), opt)
            if grad_steps % 3200 == 0:
                log.write(stage="bc", step=grad_steps, loss=loss)
    return policy


def _reward_for(result, d_aip, d_amp, weights, vae, use_aip=True):
    ri = result.reward_inputs
    latent = None
    if ri["window"] is not None and vae is not None:
        latent = vae_latent(vae, ri["window"])
    tr = Transition(
        root_pos=ri["root_pos"], root_cmd=ri["root_cmd"], action=ri["action"],
        prev_action=ri["prev_action"], fell=ri["fell"],
        reach_violations=ri["reach_violations"], obj_pos=ri["obj_pos"],
        obj_cmd=ri["obj_cmd"], latent=latent,
        amp_feature=amp_feature(ri["amp_prev"], ri["amp_frame"]))
    return compute_rewards(tr, d_aip if use_aip else None, d_amp, weights), latent, tr.amp_feature


def train_rl_stage(config: Config, vae, policy: GaussianPolicy,
                   ref: ReferenceBuffer, amp_ref: ReferenceBuffer, seed: int,
                   log: MetricsLog | None = None):
    """Stage 2: PPO with the adversarial interaction/motion priors under the
    active randomization profile."""
    log = log or MetricsLog()
    tc = config.training
    rng = np.random.default_rng(slot_seed(seed, 47, 0))
    policy = policy.copy()
    policy.log_std[:] = tc.rl_log_std_init
    d_obs = obs_dim(config)
    value_net = init_mlp(d_obs, tuple(tc.value_hidden), 1, rng)
    d_aip = init_mlp(config.representation.latent_dim, tuple(tc.disc_hidden), 1, rng)
    d_amp = init_mlp(AMP_FEATURE_DIM, tuple(tc.disc_hidden), 1, rng)
    opt_pi = OptState.for_params(policy.mean_net, tc.lr_policy)
    opt_std = OptState(policy.log_std.size, tc.lr_policy)
    opt_v = OptState.for_params(value_net, tc.lr_policy)
    opt_daip = OptState.for_params(d_aip, tc.lr_disc)
    opt_damp = OptState.for_params(d_amp, tc.lr_disc)
    weights = RewardWeights.from_config(tc)
    weights.action = tc.w_action * tc.rl_action_scale
    use_aip = tc.use_aip

    pool = EnvPool(config, task_sampler(config, salt=seed + 1),
                   base_seed=slot_seed(seed, 53, 0), vae=vae)
    n, horizon = pool.n, tc.rollout_horizon
    latent_replay = ReferenceBuffer(tc.policy_replay,
                                    config.representation.latent_dim,
                                    seed=slot_seed(seed, 83, 0))
    amp_replay = ReferenceBuffer(tc.policy_replay, AMP_FEATURE_DIM,
                                 seed=slot_seed(seed, 89, 0))
    total_steps = 0
    it = 0
    recent = []
    t_start = time.time()
    while total_steps < tc.rl_steps:
        obs_buf = np.zeros((horizon, n, d_obs))
        act_buf = np.zeros((horizon, n, 6))
        logp_buf = np.zeros((horizon, n))
        rew_buf = np.zeros((horizon, n))
        done_buf = np.zeros((horizon, n), dtype=bool)
        latents, amps = [], []
        for t in range(horizon):
            obs = pool.observations()
            noise = rng.standard_normal((n, 6))
            actions, logp = policy_sample(policy, obs, noise)
            results = pool.step(np.clip(actions, -1.0, 1.0))
            obs_buf[t] = obs
            act_buf[t] = actions
            logp_buf[t] = logp
            for i, res in enumerate(results):
                breakdown, latent, amp_vec = _reward_for(
                    res, d_aip, d_amp, weights, vae, use_aip)
                rew = breakdown.total
                if latent is not None:
                    latents.append(latent)
                amps.append(amp_vec)
                if res.truncated:
                    rew += tc.gamma * float(value_of(value_net, res.final_obs))
                done_buf[t, i] = res.done or res.truncated
                rew_buf[t, i] = rew
                if res.episode_status is not None:
                    ok = episode_success(res.episode_kind, res.episode_status,
                                         res.episode_contact_rate)
                    recent.append((res.episode_kind, 1.0 if ok else 0.0))
                    if len(recent) > 400:
                        recent.pop(0)
        total_steps += horizon * n
        flat_obs = obs_buf.reshape(-1, d_obs)
        values = value_of(value_net, flat_obs).reshape(horizon, n)
        boot = value_of(value_net, pool.observations())
        adv = gae_advantages(rew_buf, values, tc.gamma, tc.gae_lambda,
                             dones=done_buf, bootstrap=boot)
        batch = {"obs": flat_obs, "actions": act_buf.reshape(-1, 6),
                 "logp": logp_buf.reshape(-1), "advantages": adv.reshape(-1),
                 "returns": (adv + values).reshape(-1)}
        if it < tc.value_warmup_iters:
            # calibrate the critic before letting it steer the policy
            order = rng.permutation(flat_obs.shape[0])
            for start in range(0, len(order), tc.minibatch):
                idx = order[start:start + tc.minibatch]
                _, g_v = value_loss_and_grad(value_net, flat_obs[idx],
                                             batch["returns"][idx])
                adam_step(opt_v, value_net, tc.value_coef * g_v)
            stats = {"warmup": 1.0}
        else:
            stats = ppo_update(policy, value_net, batch, opt_pi, opt_std,
                               opt_v, tc, rng)
        if latents:
            latent_replay.extend(latents)
            amp_replay.extend(amps)
        if use_aip and latent_replay.size:
            for _ in range(tc.d_updates_per_iter):
                aip_loss = aip_update(d_aip, ref,
                                      latent_replay.sample(tc.disc_batch, rng),
                                      opt_daip, rng, batch=tc.disc_batch)
            stats["aip_loss"] = aip_loss
        if amp_replay.size:
            for _ in range(tc.d_updates_per_iter):
                amp_loss = aip_update(d_amp, amp_ref,
                                      amp_replay.sample(tc.disc_batch, rng),
                                      opt_damp, rng, batch=tc.disc_batch)
            stats["amp_loss"] = amp_loss
        it += 1
        if it % config.io.log_every == 0:
            by_kind = {}
            for kind in TASK_KINDS:
                vals = [ok for k, ok in recent if k == kind]
                by_kind["success_" + kind] = (round(float(np.mean(vals)), 3)
                                              if vals else -1.0)
            log.write(stage="rl", step=total_steps,
                      reward=float(rew_buf.mean()),
                      success=(float(np.mean([ok for _, ok in recent]))
                               if recent else 0.0),
                      elapsed=round(time.time() - t_start, 1), **by_kind,
                      **stats)
    return policy, value_net, d_aip, d_amp


def train_track_stage(config: Config, seed: int, max_steps: int | None = None,
                      log: MetricsLog | None = None):
    """No-object root-tracking sanity task trained with PPO from scratch.

    Returns (policy, success_rate_estimate, env_steps_used).
    """
    log = log or MetricsLog()
    tc = config.training
    rng = np.random.default_rng(slot_seed(seed, 59, 0))

    def track_task(slot, episode):
        r = np.random.default_rng(slot_seed(seed + 61, slot, episode))
        target = (float(r.uniform(-1.2, 1.2)), float(r.uniform(0.35, 0.85)))
        return make_track_task(target)

    d_obs = obs_dim(config)
    policy = init_policy(d_obs, tuple(tc.policy_hidden), 6, rng)
    value_net = init_mlp(d_obs, tuple(tc.value_hidden), 1, rng)
    opt_pi = OptState.for_params(policy.mean_net, tc.lr_policy)
    opt_std = OptState(policy.log_std.size, tc.lr_policy)
    opt_v = OptState.for_params(value_net, tc.lr_policy)
    # sanity task: tracking plus safety penalties only (no object, no priors);
    # the full Table-style action weight would drown the task signal under
    # exploration noise, and without the positive prior terms an alive bonus
    # must keep early termination strictly worse than tracking
    weights = RewardWeights.from_config(tc)
    weights.action = 0.5
    alive_bonus = 1.0
    pool = EnvPool(config, track_task, base_seed=slot_seed(seed, 67, 0), vae=None)
    n, horizon = pool.n, tc.rollout_horizon
    budget = max_steps or tc.rl_steps
    total = 0
    recent = []
    recent_err = []
    while total < budget:
        obs_buf = np.zeros((horizon, n, d_obs))
        act_buf = np.zeros((horizon, n, 6))
        logp_buf = np.zeros((horizon, n))
        rew_buf = np.zeros((horizon, n))
        done_buf = np.zeros((horizon, n), dtype=bool)
        for t in range(horizon):
            obs = pool.observations()
            noise = rng.standard_normal((n, 6))
            actions, logp = policy_sample(policy, obs, noise)
            results = pool.step(np.clip(actions, -1.0, 1.0))
            obs_buf[t] = obs
            act_buf[t] = actions
            logp_buf[t] = logp
            for i, res in enumerate(results):
                breakdown, _, _ = _reward_for(res, None, None, weights, None)
                rew = breakdown.total + alive_bonus
                if res.truncated:
                    rew += tc.gamma * float(value_of(value_net, res.final_obs))
                rew_buf[t, i] = rew
                done_buf[t, i] = res.done or res.truncated
                if res.episode_status is not None:
                    recent.append(1.0 if res.episode_status == SUCCESS else 0.0)
                    recent_err.append(float(np.linalg.norm(res.final_obs[:2])))
                    if len(recent) > 100:
                        recent.pop(0)
                        recent_err.pop(0)
        total += horizon * n
        flat_obs = obs_buf.reshape(-1, d_obs)
        values = value_of(value_net, flat_obs).reshape(horizon, n)
        boot = value_of(value_net, pool.observations())
        adv = gae_advantages(rew_buf, values, tc.gamma, tc.gae_lambda,
                             dones=done_buf, bootstrap=boot)
        batch = {"obs": flat_obs, "actions": act_buf.reshape(-1, 6),
                 "logp": logp_buf.reshape(-1), "advantages": adv.reshape(-1),
                 "returns": (adv + values).reshape(-1)}
        ppo_update(policy, value_net, batch, opt_pi, opt_std, opt_v, tc, rng)
        rate = float(np.mean(recent)) if recent else 0.0
        log.write(stage="track", step=total, success=rate,
                  reward=float(rew_buf.mean()),
                  final_err=float(np.mean(recent_err)) if recent_err else -1.0,
                  log_std=float(np.mean(policy.log_std)))
        if len(recent) >= 100 and rate >= 0.95:
            break
    return policy, float(np.mean(recent)) if recent else 0.0, total
