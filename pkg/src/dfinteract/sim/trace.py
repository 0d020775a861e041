"""Episode traces: line-delimited JSON records for replay and plotting."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def _floats(arr):
    return [float(v) for v in np.asarray(arr).ravel()]


def step_record(state, action, events, reward: dict | None = None) -> dict:
    agent = state.agent
    rec = {
        "t": round(state.t, 9),
        "step": state.step_count,
        "root": _floats(agent.root.position),
        "root_vel": _floats(agent.root.velocity),
        "eff_a": _floats(agent.eff_a.position),
        "eff_b": _floats(agent.eff_b.position),
        "action": _floats(action),
        "objects": [
            {
                "kind": o.shape.kind,
                "pose": [o.pose.translation[0], o.pose.translation[1], o.pose.rotation],
                "vel": _floats(o.velocity),
                "ang_vel": float(o.ang_vel),
                "attached": bool(o.attached),
            }
            for o in state.objects
        ],
        "events": {
            "contact_a": bool(events.contact_a),
            "contact_b": bool(events.contact_b),
            "attach": bool(events.attach),
            "detach": bool(events.detach),
            "fell": bool(events.fell),
            "reach_violations": int(events.reach_violations),
        },
    }
    if reward is not None:
        rec["reward"] = {k: float(v) for k, v in reward.items()}
    return rec


class TraceWriter:
    def __init__(self, path, header: dict | None = None):
        self.path = Path(path)
        self._fh = open(self.path, "w")
        if header is not None:
            self._fh.write(json.dumps({"header": header}, sort_keys=True) + "\n")

    def write(self, record: dict):
        self._fh.write(json.dumps(record, sort_keys=True) + "\n")

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_trace(path):
    """(header or None, list of step records)."""
    header = None
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "header" in obj and not records and header is None:
                header = obj["header"]
            else:
                records.append(obj)
    return header, records
