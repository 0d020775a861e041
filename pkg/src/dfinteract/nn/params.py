"""Flat parameter storage for small MLPs.

All weights and biases of a network live in one contiguous float64 vector;
per-layer matrices are views into it. Optimizers and checkpoints only ever
see the flat vector, which keeps Adam, finite-difference checks, and
serialization trivial.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError

RELU = "relu"
TANH = "tanh"
LINEAR = "linear"
_ACTS = (RELU, TANH, LINEAR)


class ParamSet:
    """Layer shapes, activation tags, and the flat weight/bias storage."""

    def __init__(self, shapes, activations, data=None):
        shapes = [(int(i), int(o)) for i, o in shapes]
        activations = list(activations)
        if len(shapes) != len(activations):
            raise InvalidInputError("one activation tag per layer")
        for a in activations:
            if a not in _ACTS:
                raise InvalidInputError(f"unknown activation {a!r}")
        for (_, o1), (i2, _) in zip(shapes, shapes[1:]):
            if o1 != i2:
                raise InvalidInputError("layer shapes do not chain")
        self.shapes = shapes
        self.activations = activations
        size = sum(i * o + o for i, o in shapes)
        if data is None:
            data = np.zeros(size)
        else:
            data = np.asarray(data, dtype=np.float64)
            if data.shape != (size,):
                raise InvalidInputError(f"flat storage must have {size} entries")
        self.data = data
        self._views = []
        k = 0
        for i, o in shapes:
            w = self.data[k:k + i * o].reshape(i, o)
            k += i * o
            b = self.data[k:k + o]
            k += o
            self._views.append((w, b))

    @property
    def in_dim(self) -> int:
        return self.shapes[0][0]

    @property
    def out_dim(self) -> int:
        return self.shapes[-1][1]

    @property
    def size(self) -> int:
        return self.data.size

    def layer(self, l):
        """(weight view, bias view) for layer ``l``."""
        return self._views[l]

    def copy(self) -> "ParamSet":
        return ParamSet(self.shapes, self.activations, self.data.copy())

    def zeros_like(self) -> np.ndarray:
        return np.zeros_like(self.data)


def mlp_shapes(in_dim, hidden, out_dim):
    dims = [in_dim, *hidden, out_dim]
    return list(zip(dims[:-1], dims[1:]))


def init_mlp(in_dim, hidden, out_dim, rng, out_scale=1.0,
             hidden_act=RELU, out_act=LINEAR) -> ParamSet:
    """He-uniform initialized MLP; hidden layers ReLU, output linear."""
    shapes = mlp_shapes(in_dim, hidden, out_dim)
    acts = [hidden_act] * (len(shapes) - 1) + [out_act]
    ps = ParamSet(shapes, acts)
    for l, (i, o) in enumerate(shapes):
        limit = np.sqrt(6.0 / i)
        if l == len(shapes) - 1:
            limit *= out_scale
        w, b = ps.layer(l)
        w[:] = rng.uniform(-limit, limit, size=(i, o))
        b[:] = 0.0
    return ps
