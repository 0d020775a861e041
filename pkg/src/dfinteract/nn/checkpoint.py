"""Versioned checkpoint container for networks and optimizer states.

A checkpoint is an .npz archive holding every flat storage array plus a JSON
manifest describing object kinds and layer shapes; loading validates the
manifest against the stored arrays and rejects mismatches.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import CheckpointError
from .adam import OptState
from .params import ParamSet
from .policy import GaussianPolicy
from .vae import VaeParams

FORMAT_VERSION = 1


def _describe(obj):
    if isinstance(obj, ParamSet):
        return {"kind": "paramset", "shapes": obj.shapes,
                "activations": obj.activations}
    if isinstance(obj, GaussianPolicy):
        return {"kind": "policy", "shapes": obj.mean_net.shapes,
                "activations": obj.mean_net.activations,
                "action_dim": obj.action_dim}
    if isinstance(obj, VaeParams):
        return {"kind": "vae", "beta": obj.beta,
                "enc_shapes": obj.encoder.shapes,
                "enc_activations": obj.encoder.activations,
                "dec_shapes": obj.decoder.shapes,
                "dec_activations": obj.decoder.activations}
    if isinstance(obj, OptState):
        return {"kind": "optstate", "lr": obj.lr, "beta1": obj.beta1,
                "beta2": obj.beta2, "eps": obj.eps, "step": obj.step_count}
    if isinstance(obj, np.ndarray):
        return {"kind": "array", "shape": list(obj.shape)}
    raise CheckpointError(f"cannot checkpoint object of type {type(obj)!r}")


def _arrays_for(name, obj):
    if isinstance(obj, ParamSet):
        return {name: obj.data}
    if isinstance(obj, GaussianPolicy):
        return {name: obj.mean_net.data, name + ".log_std": obj.log_std}
    if isinstance(obj, VaeParams):
        return {name + ".enc": obj.encoder.data, name + ".dec": obj.decoder.data}
    if isinstance(obj, OptState):
        return {name + ".m": obj.m, name + ".v": obj.v}
    return {name: obj}


def save_checkpoint(path, objects: dict, meta: dict | None = None) -> None:
    """Write named ParamSet/GaussianPolicy/VaeParams/OptState/array objects."""
    manifest = {"version": FORMAT_VERSION, "meta": meta or {},
                "entries": {name: _describe(obj) for name, obj in objects.items()}}
    arrays = {}
    for name, obj in objects.items():
        arrays.update(_arrays_for(name, obj))
    np.savez(path, __manifest__=np.frombuffer(
        json.dumps(manifest, sort_keys=True).encode(), dtype=np.uint8), **arrays)


def _expect(archive, key, size=None):
    if key not in archive:
        raise CheckpointError(f"missing array {key!r}")
    arr = np.asarray(archive[key], dtype=np.float64)
    if size is not None and arr.size != size:
        raise CheckpointError(f"array {key!r} has {arr.size} entries, expected {size}")
    return arr


def load_checkpoint(path):
    """Reconstruct objects; returns (objects dict, meta dict)."""
    with np.load(path) as archive:
        if "__manifest__" not in archive:
            raise CheckpointError("not a checkpoint: manifest missing")
        manifest = json.loads(bytes(archive["__manifest__"]).decode())
        if manifest.get("version") != FORMAT_VERSION:
            raise CheckpointError(f"unsupported version {manifest.get('version')}")
        out = {}
        for name, desc in manifest["entries"].items():
            kind = desc["kind"]
            if kind == "paramset":
                ps = ParamSet(desc["shapes"], desc["activations"])
                ps.data[:] = _expect(archive, name, ps.size)
                out[name] = ps
            elif kind == "policy":
                net = ParamSet(desc["shapes"], desc["activations"])
                net.data[:] = _expect(archive, name, net.size)
                log_std = _expect(archive, name + ".log_std", desc["action_dim"])
                out[name] = GaussianPolicy(net, log_std)
            elif kind == "vae":
                enc = ParamSet(desc["enc_shapes"], desc["enc_activations"])
                dec = ParamSet(desc["dec_shapes"], desc["dec_activations"])
                enc.data[:] = _expect(archive, name + ".enc", enc.size)
                dec.data[:] = _expect(archive, name + ".dec", dec.size)
                out[name] = VaeParams(enc, dec, desc["beta"])
            elif kind == "optstate":
                m = _expect(archive, name + ".m")
                opt = OptState(m.size, desc["lr"], desc["beta1"], desc["beta2"],
                               desc["eps"])
                opt.m[:] = m
                opt.v[:] = _expect(archive, name + ".v", m.size)
                opt.step_count = int(desc["step"])
                out[name] = opt
            elif kind == "array":
                arr = _expect(archive, name)
                out[name] = arr.reshape(desc["shape"])
            else:
                raise CheckpointError(f"unknown entry kind {kind!r}")
        return out, manifest["meta"]
