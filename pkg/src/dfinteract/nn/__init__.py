"""Minimal differentiable building blocks: MLPs with exact reverse-mode
gradients, Adam, a window VAE, Gaussian policy heads, and LSGAN losses."""

from .adam import OptState, adam_step, adam_step_array
from .checkpoint import load_checkpoint, save_checkpoint
from .gan import lsgan_d_loss, lsgan_d_loss_and_grad
from .mlp import mlp_backward, mlp_forward, mlp_forward_cached, mse_loss_and_grad
from .params import LINEAR, RELU, TANH, ParamSet, init_mlp, mlp_shapes
from .policy import (GaussianPolicy, gaussian_entropy, gaussian_log_prob,
                     init_policy, policy_sample)
from .vae import (VaeParams, init_vae, kl_to_standard_normal, reparameterize,
                  vae_encode, vae_latent, vae_loss, vae_loss_and_grad)

__all__ = [
    "GaussianPolicy", "LINEAR", "OptState", "ParamSet", "RELU", "TANH",
    "VaeParams", "adam_step", "adam_step_array", "gaussian_entropy",
    "gaussian_log_prob", "init_mlp", "init_policy", "init_vae",
    "kl_to_standard_normal", "load_checkpoint", "lsgan_d_loss",
    "lsgan_d_loss_and_grad", "mlp_backward", "mlp_forward",
    "mlp_forward_cached", "mlp_shapes", "mse_loss_and_grad", "policy_sample",
    "reparameterize", "save_checkpoint", "vae_encode", "vae_latent",
    "vae_loss", "vae_loss_and_grad",
]
