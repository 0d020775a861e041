"""Adversarial priors: reference buffers and discriminator updates.

The interaction prior discriminates policy interaction latents from latents
of successful teacher episodes; the motion prior does the same on short
robot-state snippets. Both train with the least-squares objective.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError, QualificationError
from ..nn import OptState, ParamSet, adam_step, lsgan_d_loss_and_grad, vae_latent


class ReferenceBuffer:
    """Fixed-capacity reservoir of feature vectors, uniform over the stream."""

    def __init__(self, capacity: int, dim: int, seed: int = 0):
        if capacity < 1 or dim < 1:
            raise InvalidInputError("capacity and dim must be >= 1")
        self.capacity = capacity
        self.data = np.zeros((capacity, dim))
        self.size = 0
        self.seen = 0
        self._rng = np.random.default_rng(seed)

    def add(self, vec: np.ndarray):
        self.seen += 1
        if self.size < self.capacity:
            self.data[self.size] = vec
            self.size += 1
            return
        j = int(self._rng.integers(self.seen))
        if j < self.capacity:
            self.data[j] = vec

    def extend(self, vecs):
        for v in vecs:
            self.add(v)

    def sample(self, batch: int, rng: np.random.Generator) -> np.ndarray:
        if self.size == 0:
            raise InvalidInputError("buffer is empty")
        idx = rng.integers(self.size, size=batch)
        return self.data[idx]


def aip_update(d_net: ParamSet, ref: ReferenceBuffer, policy_latents,
               opt: OptState, rng: np.random.Generator,
               batch: int = 256) -> float:
    """One Adam step of the least-squares objective; returns the pre-step loss."""
    latents = np.atleast_2d(np.asarray(policy_latents, dtype=np.float64))
    if latents.shape[0] == 0:
        raise InvalidInputError("no policy latents")
    real = ref.sample(batch, rng)
    take = rng.integers(latents.shape[0], size=min(batch, latents.shape[0]))
    loss, grad = lsgan_d_loss_and_grad(d_net, real, latents[take])
    adam_step(opt, d_net, grad)
    return loss


def build_ref_buffer(windows_by_episode, success_flags, vae, capacity: int,
                     seed: int = 0) -> ReferenceBuffer:
    """Encode windows of successful episodes into a fresh reservoir.

    Fails when fewer than 10% of the supplied episodes succeeded: a prior
    built from a broken teacher would poison the post-training stage.
    """
    if not windows_by_episode:
        raise QualificationError("no teacher episodes supplied")
    n_ok = int(np.sum(success_flags))
    if n_ok < 0.1 * len(success_flags):
        raise QualificationError(
            f"teacher success {n_ok}/{len(success_flags)} below the 10% gate")
    buf = ReferenceBuffer(capacity, vae.latent_dim, seed=seed)
    for windows, ok in zip(windows_by_episode, success_flags):
        if not ok or len(windows) == 0:
            continue
        latents = vae_latent(vae, np.asarray(windows))
        buf.extend(latents)
    if buf.size == 0:
        raise QualificationError("no latents collected from successful episodes")
    return buf
