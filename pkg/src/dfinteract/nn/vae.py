"""Window VAE: MLP encoder/decoder, reparameterized sampling, ELBO-style loss.

The encoder maps a flattened interaction window to (mean, logvar) halves; the
KL weight beta is small because the latent mainly serves as a smoothing
bottleneck for the policy input.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError
from .mlp import mlp_backward, mlp_forward, mlp_forward_cached
from .params import ParamSet, init_mlp


class VaeParams:
    def __init__(self, encoder: ParamSet, decoder: ParamSet, beta: float):
        if encoder.out_dim != 2 * decoder.in_dim:
            raise InvalidInputError("encoder must emit mean and logvar halves")
        if decoder.out_dim != encoder.in_dim:
            raise InvalidInputError("decoder must reconstruct the encoder input")
        self.encoder = encoder
        self.decoder = decoder
        self.beta = float(beta)

    @property
    def latent_dim(self) -> int:
        return self.decoder.in_dim

    @property
    def input_dim(self) -> int:
        return self.encoder.in_dim


def init_vae(input_dim, latent_dim, hidden, beta, rng) -> VaeParams:
    enc = init_mlp(input_dim, hidden, 2 * latent_dim, rng)
    dec = init_mlp(latent_dim, hidden, input_dim, rng)
    return VaeParams(enc, dec, beta)


def vae_encode(vae: VaeParams, window_vec):
    """(mean, logvar): the two halves of the encoder output."""
    out = mlp_forward(vae.encoder, window_vec)
    d = vae.latent_dim
    return out[..., :d], out[..., d:]


def vae_latent(vae: VaeParams, window_vec):
    """Deterministic inference latent: the encoder mean, no sampling."""
    return vae_encode(vae, window_vec)[0]


def reparameterize(mean, logvar, noise):
    """z = mean + exp(logvar/2) * noise."""
    mean = np.asarray(mean, dtype=np.float64)
    logvar = np.asarray(logvar, dtype=np.float64)
    noise = np.asarray(noise, dtype=np.float64)
    if mean.shape != logvar.shape or mean.shape != noise.shape:
        raise InvalidInputError("mean/logvar/noise dimensions differ")
    return mean + np.exp(0.5 * logvar) * noise


def kl_to_standard_normal(mean, logvar) -> np.ndarray:
    """Per-sample KL(q || N(0, I)) = -1/2 sum(1 + logvar - mean^2 - e^logvar)."""
    mean = np.atleast_2d(np.asarray(mean, dtype=np.float64))
    logvar = np.atleast_2d(np.asarray(logvar, dtype=np.float64))
    return -0.5 * np.sum(1.0 + logvar - mean * mean - np.exp(logvar), axis=1)


def vae_loss(vae: VaeParams, windows, noise) -> float:
    """Reconstruction MSE plus beta * mean KL over the batch."""
    return vae_loss_and_grad(vae, windows, noise)[0]


def vae_loss_and_grad(vae: VaeParams, windows, noise):
    """Loss and exact gradients for (encoder, decoder) flat storage."""
    x = np.atleast_2d(np.asarray(windows, dtype=np.float64))
    eps = np.atleast_2d(np.asarray(noise, dtype=np.float64))
    if x.shape[0] == 0:
        raise InvalidInputError("empty batch")
    n, d_z = x.shape[0], vae.latent_dim
    if eps.shape != (n, d_z):
        raise InvalidInputError("noise batch must be (batch, latent_dim)")

    enc_out, enc_cache = mlp_forward_cached(vae.encoder, x)
    mean, logvar = enc_out[:, :d_z], enc_out[:, d_z:]
    std = np.exp(0.5 * logvar)
    z = mean + std * eps
    recon, dec_cache = mlp_forward_cached(vae.decoder, z)

    err = recon - x
    recon_loss = float(np.mean(err * err))
    kl = kl_to_standard_normal(mean, logvar)
    loss = recon_loss + vae.beta * float(np.mean(kl))

    d_recon = (2.0 / err.size) * err
    dec_grad, dz = mlp_backward(vae.decoder, dec_cache, d_recon)
    d_mean = dz + (vae.beta / n) * mean
    d_logvar = dz * eps * 0.5 * std + (vae.beta / n) * 0.5 * (np.exp(logvar) - 1.0)
    enc_grad, _ = mlp_backward(vae.encoder, enc_cache,
                               np.concatenate([d_mean, d_logvar], axis=1))
    return loss, (enc_grad, dec_grad)
