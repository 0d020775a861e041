"""Per-link interaction features and their temporal window.

The feature is the tuple (distance, surface normal, normal velocity,
tangential velocity) a link sees relative to the nearest object surface;
windows stack the last ``length`` features per tracked link and flatten to
the encoder input layout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyWindowError, InvalidInputError
from .geometry import DfSample

FEATURE_DIM = 7  # distance, gx, gy, vnx, vny, vtx, vty


@dataclass
class LinkState:
    position: np.ndarray
    velocity: np.ndarray


@dataclass
class InteractionFeature:
    distance: float
    gradient: np.ndarray
    v_norm: np.ndarray
    v_tan: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.array([
            self.distance,
            self.gradient[0], self.gradient[1],
            self.v_norm[0], self.v_norm[1],
            self.v_tan[0], self.v_tan[1],
        ])


def decompose_velocity(velocity, gradient):
    """Split a velocity into its component along the surface normal and the
    tangential remainder: v_norm = (v . g) g, v_tan = v - v_norm."""
    v = np.asarray(velocity, dtype=np.float64)
    g = np.asarray(gradient, dtype=np.float64)
    norm = float(np.sqrt(g[0] * g[0] + g[1] * g[1]))
    if abs(norm - 1.0) > 1e-6:
        raise InvalidInputError(f"gradient must be a unit vector, |g|={norm}")
    v_norm = (v[0] * g[0] + v[1] * g[1]) * g
    return v_norm, v - v_norm


def extract_feature(link: LinkState, sample: DfSample) -> InteractionFeature:
    """Assemble the per-link tuple from a field sample and the link velocity."""
    v_norm, v_tan = decompose_velocity(link.velocity, sample.gradient)
    return InteractionFeature(sample.distance, np.array(sample.gradient), v_norm, v_tan)


class InteractionWindow:
    """Fixed-length per-link history of interaction features.

    Before ``length`` pushes have accumulated, flattening repeats the earliest
    real feature into the missing slots; zero padding would fabricate
    in-contact stationary signatures.
    """

    def __init__(self, num_links: int, length: int):
        if num_links < 1 or length < 1:
            raise InvalidInputError("window needs >= 1 link and length >= 1")
        self.num_links = num_links
        self.length = length
        self._rows: list[list[InteractionFeature]] = []

    @property
    def fill(self) -> int:
        return len(self._rows)

    @property
    def flat_dim(self) -> int:
        return self.num_links * self.length * FEATURE_DIM

    def push(self, features) -> "InteractionWindow":
        features = list(features)
        if len(features) != self.num_links:
            raise InvalidInputError(
                f"expected {self.num_links} features, got {len(features)}")
        self._rows.append(features)
        if len(self._rows) > self.length:
            self._rows.pop(0)
        return self

    def flatten(self) -> np.ndarray:
        """Link-major, time-major layout; scalars per FEATURE_DIM order."""
        if not self._rows:
            raise EmptyWindowError("window was never pushed")
        pad = self.length - len(self._rows)
        out = np.empty(self.flat_dim)
        k = 0
        for link in range(self.num_links):
            for t in range(self.length):
                row = self._rows[max(0, t - pad)]
                out[k:k + FEATURE_DIM] = row[link].as_vector()
                k += FEATURE_DIM
        return out

    def copy(self) -> "InteractionWindow":
        w = InteractionWindow(self.num_links, self.length)
        w._rows = [list(r) for r in self._rows]
        return w


def push_feature(window: InteractionWindow, features) -> InteractionWindow:
    """Append one per-link feature set, evicting the oldest when full."""
    return window.push(features)


def flatten_window(window: InteractionWindow) -> np.ndarray:
    return window.flatten()


FEATURE_CSV_HEADER = "t,link,distance,gx,gy,vnx,vny,vtx,vty"


def format_feature_row(t: int, link: int, feat: InteractionFeature) -> str:
    """One CSV record of the feature dump format."""
    vals = feat.as_vector()
    return f"{t},{link}," + ",".join(repr(float(v)) for v in vals)


def dump_features(path, per_step_features) -> None:
    """Write per-step, per-link feature records for offline inspection."""
    with open(path, "w") as fh:
        fh.write(FEATURE_CSV_HEADER + "\n")
        for t, feats in enumerate(per_step_features):
            for link, feat in enumerate(feats):
                fh.write(format_feature_row(t, link, feat) + "\n")
