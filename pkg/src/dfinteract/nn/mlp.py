"""Forward and exact reverse-mode passes for flat-storage MLPs."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError
from .params import LINEAR, RELU, TANH, ParamSet


def _act(tag, z):
    if tag == RELU:
        return np.maximum(z, 0.0)
    if tag == TANH:
        return np.tanh(z)
    return z


def _dact(tag, z, a):
    if tag == RELU:
        return (z > 0.0).astype(np.float64)
    if tag == TANH:
        return 1.0 - a * a
    return np.ones_like(z)


def mlp_forward(params: ParamSet, x):
    """Evaluate the network; accepts a single vector or a (batch, dim) array."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    h = x[None, :] if single else x
    if h.shape[1] != params.in_dim:
        raise InvalidInputError(
            f"input dim {h.shape[1]} != network in_dim {params.in_dim}")
    for l in range(len(params.shapes)):
        w, b = params.layer(l)
        h = _act(params.activations[l], h @ w + b)
    return h[0] if single else h


def mlp_forward_cached(params: ParamSet, x):
    """Forward pass keeping per-layer inputs and pre-activations for backward."""
    h = np.asarray(x, dtype=np.float64)
    if h.ndim == 1:
        h = h[None, :]
    if h.shape[1] != params.in_dim:
        raise InvalidInputError(
            f"input dim {h.shape[1]} != network in_dim {params.in_dim}")
    inputs = []
    preacts = []
    for l in range(len(params.shapes)):
        w, b = params.layer(l)
        inputs.append(h)
        z = h @ w + b
        preacts.append(z)
        h = _act(params.activations[l], z)
    return h, (inputs, preacts)


def mlp_backward(params: ParamSet, cache, d_out):
    """Backpropagate an upstream gradient; returns (flat grad, d_input)."""
    inputs, preacts = cache
    d = np.asarray(d_out, dtype=np.float64)
    if d.ndim == 1:
        d = d[None, :]
    grad = params.zeros_like()
    k = params.size
    for l in range(len(params.shapes) - 1, -1, -1):
        w, _ = params.layer(l)
        z = preacts[l]
        a = _act(params.activations[l], z)
        dz = d * _dact(params.activations[l], z, a)
        i, o = params.shapes[l]
        gb = dz.sum(axis=0)
        gw = inputs[l].T @ dz
        k -= o
        grad[k:k + o] = gb
        k -= i * o
        grad[k:k + i * o] = gw.ravel()
        d = dz @ w.T
    return grad, d


def mse_loss_and_grad(params: ParamSet, x, targets):
    """Mean-squared-error loss over all output elements and its exact gradient."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    t = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    if x.shape[0] == 0:
        raise InvalidInputError("empty batch")
    y, cache = mlp_forward_cached(params, x)
    err = y - t
    loss = float(np.mean(err * err))
    d_out = (2.0 / err.size) * err
    grad, _ = mlp_backward(params, cache, d_out)
    return loss, grad
