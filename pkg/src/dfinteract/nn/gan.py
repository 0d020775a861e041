"""Least-squares GAN discriminator objective (+1 real / -1 fake targets)."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError
from .mlp import mlp_backward, mlp_forward, mlp_forward_cached
from .params import ParamSet


def _scores(params: ParamSet, batch):
    x = np.atleast_2d(np.asarray(batch, dtype=np.float64))
    if x.shape[0] == 0:
        raise InvalidInputError("empty batch")
    return x


def lsgan_d_loss(d: ParamSet, real, fake) -> float:
    """mean_real (D(z)-1)^2 + mean_fake (D(z)+1)^2."""
    real = _scores(d, real)
    fake = _scores(d, fake)
    sr = mlp_forward(d, real)[:, 0]
    sf = mlp_forward(d, fake)[:, 0]
    return float(np.mean((sr - 1.0) ** 2) + np.mean((sf + 1.0) ** 2))


def lsgan_d_loss_and_grad(d: ParamSet, real, fake):
    """Loss plus the exact gradient of the discriminator parameters."""
    real = _scores(d, real)
    fake = _scores(d, fake)
    sr, cache_r = mlp_forward_cached(d, real)
    sf, cache_f = mlp_forward_cached(d, fake)
    er = sr[:, 0] - 1.0
    ef = sf[:, 0] + 1.0
    loss = float(np.mean(er * er) + np.mean(ef * ef))
    gr, _ = mlp_backward(d, cache_r, (2.0 / len(er)) * er[:, None])
    gf, _ = mlp_backward(d, cache_f, (2.0 / len(ef)) * ef[:, None])
    return loss, gr + gf
