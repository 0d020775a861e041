"""Bias-corrected Adam on flat parameter storage."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError
from .params import ParamSet


class OptState:
    """First/second-moment accumulators matching one ParamSet layout."""

    def __init__(self, size: int, lr: float, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.step_count = 0
        self.lr = float(lr)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.eps = float(eps)

    @classmethod
    def for_params(cls, params: ParamSet, lr: float, **kw) -> "OptState":
        return cls(params.size, lr, **kw)


def adam_step(opt: OptState, params: ParamSet, grad: np.ndarray):
    """One in-place update; returns (opt, params) for chaining."""
    if grad.shape != params.data.shape or opt.m.shape != params.data.shape:
        raise InvalidInputError("optimizer/parameter/gradient layouts differ")
    opt.step_count += 1
    t = opt.step_count
    opt.m *= opt.beta1
    opt.m += (1.0 - opt.beta1) * grad
    opt.v *= opt.beta2
    opt.v += (1.0 - opt.beta2) * (grad * grad)
    m_hat = opt.m / (1.0 - opt.beta1 ** t)
    v_hat = opt.v / (1.0 - opt.beta2 ** t)
    params.data -= opt.lr * m_hat / (np.sqrt(v_hat) + opt.eps)
    return opt, params


def adam_step_array(opt: OptState, arr: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Adam update for a bare array (e.g. a policy's log-std vector)."""
    if grad.shape != arr.shape or opt.m.shape != arr.shape:
        raise InvalidInputError("optimizer/array/gradient layouts differ")
    opt.step_count += 1
    t = opt.step_count
    opt.m *= opt.beta1
    opt.m += (1.0 - opt.beta1) * grad
    opt.v *= opt.beta2
    opt.v += (1.0 - opt.beta2) * (grad * grad)
    m_hat = opt.m / (1.0 - opt.beta1 ** t)
    v_hat = opt.v / (1.0 - opt.beta2 ** t)
    arr -= opt.lr * m_hat / (np.sqrt(v_hat) + opt.eps)
    return arr
