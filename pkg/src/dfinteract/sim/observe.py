"""Observation assembly.

The policy observation is [o_prop (14), command block (4), latent (d_z)]:

  o_prop = root tracking error (2), root velocity (2), effector offsets
           root-relative (2 + 2), previous action (6)
  command block = current and +0.5 s command samples, root-relative

Root position enters only as the error to the current command, which keeps
the layout bounded over arbitrarily long composed trajectories; translating
the whole scene (agent + objects, commands fixed) therefore changes exactly
the root entries. The same layout is used at training and inference.
"""

from __future__ import annotations

import numpy as np

from ..nn import vae_latent
from .world import EnvState

PROP_DIM = 14
COMMAND_LOOKAHEAD = 0.5


def jittered_command(state: EnvState, t: float) -> np.ndarray:
    return state.task.root_path.at(t) + state.command_jitter


def observe_prop(state: EnvState) -> np.ndarray:
    agent = state.agent
    c = jittered_command(state, state.t)
    out = np.empty(PROP_DIM)
    out[0:2] = agent.root.position - c
    out[2:4] = agent.root.velocity
    out[4:6] = agent.eff_a.position - agent.root.position
    out[6:8] = agent.eff_b.position - agent.root.position
    out[8:14] = agent.prev_action
    return out


def command_block(state: EnvState) -> np.ndarray:
    root = state.agent.root.position
    now = jittered_command(state, state.t)
    ahead = jittered_command(state, state.t + COMMAND_LOOKAHEAD)
    return np.concatenate([now - root, ahead - root])


def latent(state: EnvState, vae) -> np.ndarray:
    """Inference latent: encoder mean of the flattened window; zeros when the
    scene has no objects (the no-object sanity task)."""
    d_z = state.config.representation.latent_dim
    if vae is None or not state.objects or state.window.fill == 0:
        return np.zeros(d_z)
    return vae_latent(vae, state.window.flatten())


def build_observation(state: EnvState, vae) -> np.ndarray:
    return np.concatenate([observe_prop(state), command_block(state),
                           latent(state, vae)])


def obs_dim(config) -> int:
    return PROP_DIM + 4 + config.representation.latent_dim


def vision_obs_dim(config) -> int:
    r = config.representation
    return PROP_DIM + 4 + r.n_rays * r.depth_frames


def build_vision_observation(state: EnvState) -> np.ndarray:
    """[o_prop, command block, stacked depth history oldest-first]."""
    r = state.config.representation
    frames = state.depth_history
    if not frames:
        raise ValueError("depth history empty; call push_depth after reset")
    pad = r.depth_frames - len(frames)
    stack = [frames[max(0, i - pad)] for i in range(r.depth_frames)]
    return np.concatenate([observe_prop(state), command_block(state), *stack])
