"""Sequence enhancement under a computation-reuse configuration.

A ReuseConfig holds the three runtime knobs: theta_f frames reuse the
last gamma map after each keyframe, theta_l leading layers reuse cached
activations on recompute frames, and theta_d downsamples the frame fed
to the network. The gamma map is always upsampled back and applied at
full resolution, so reused frames keep their own pixel content.
"""

import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curves import GammaMap, apply_gamma_curve
from .frames import Frame, FrameSequence
from .imageio import resize_array
from .net import NetworkSpec, forward_partial

THETA_F_VALUES = tuple(range(11))
THETA_L_VALUES = tuple(range(4))
THETA_D_VALUES = (Fraction(1), Fraction(1, 2), Fraction(1, 3))

ACTION_FULL = "full_compute"
ACTION_PARTIAL = "partial_compute"
ACTION_REUSE = "reuse_map"


@dataclass(frozen=True)
class ReuseConfig:
    theta_f: int = 0
    theta_l: int = 0
    theta_d: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "theta_d", Fraction(self.theta_d))
        if self.theta_f not in THETA_F_VALUES:
            raise ValueError(f"theta_f must be in 0..10, got {self.theta_f}")
        if self.theta_l not in THETA_L_VALUES:
            raise ValueError(f"theta_l must be in 0..3, got {self.theta_l}")
        if self.theta_d not in THETA_D_VALUES:
            raise ValueError(f"theta_d must be one of 1, 1/2, 1/3, got {self.theta_d}")

    def to_dict(self) -> dict:
        return {"theta_f": self.theta_f, "theta_l": self.theta_l, "theta_d": str(self.theta_d)}

    @classmethod
    def from_dict(cls, d: dict) -> "ReuseConfig":
        return cls(int(d["theta_f"]), int(d["theta_l"]), Fraction(d["theta_d"]))


@dataclass(frozen=True)
class FramePlan:
    frame_index: int
    action: str
    resolution_factor: Fraction

    def to_dict(self) -> dict:
        return {
            "frame_index": self.frame_index,
            "action": self.action,
            "resolution_factor": str(self.resolution_factor),
        }


def expand_config(config: ReuseConfig, n_frames: int) -> list:
    """Static per-frame plan for a fixed config.

    Keyframes land every theta_f + 1 frames; the first one is always a
    full compute, later ones are partial when theta_l > 0. Frames in
    between reuse the latest gamma map.
    """
    if n_frames < 1:
        raise ValueError("need at least one frame")
    plans = []
    period = config.theta_f + 1
    for i in range(n_frames):
        if i % period == 0:
            action = ACTION_PARTIAL if (config.theta_l > 0 and i > 0) else ACTION_FULL
        else:
            action = ACTION_REUSE
        plans.append(FramePlan(i, action, config.theta_d))
    return plans


def expand_layer_masks(config: ReuseConfig, n_frames: int, n_layers: int) -> np.ndarray:
    """Boolean (frame, layer) execution mask matching the scheduler's plan."""
    if config.theta_l >= n_layers:
        raise ValueError(f"theta_l={config.theta_l} needs a network deeper than {n_layers} layers")
    masks = np.zeros((n_frames, n_layers), dtype=bool)
    for plan in expand_config(config, n_frames):
        if plan.action == ACTION_FULL:
            masks[plan.frame_index, :] = True
        elif plan.action == ACTION_PARTIAL:
            masks[plan.frame_index, config.theta_l :] = True
    return masks


class StreamEnhancer:
    """Stateful per-stream enhancer; processes frames in order.

    The active config may change between frames (the controller swaps it
    at frame boundaries); a resolution change invalidates the layer
    cache, forcing the next compute frame to run in full.
    """

    def __init__(self, spec: NetworkSpec):
        self.spec = spec
        self._gamma_full: GammaMap | None = None
        self._cache = None
        self._since_compute = 0
        self.executed_log: list = []

    def _target_dims(self, frame: Frame, config: ReuseConfig) -> tuple:
        h = int(config.theta_d * frame.height)
        w = int(config.theta_d * frame.width)
        if h < 1 or w < 1:
            raise ValueError(f"downsampling {config.theta_d} degenerates {frame.height}x{frame.width}")
        return h, w

    def process(self, frame: Frame, config: ReuseConfig):
        """Enhance one frame; returns (enhanced, plan, latency_ms)."""
        start = time.perf_counter()
        idx = len(self.executed_log)
        ds_h, ds_w = self._target_dims(frame, config)
        needs_compute = self._gamma_full is None or self._since_compute + 1 > config.theta_f
        if needs_compute:
            if ds_h == frame.height and ds_w == frame.width:
                ds_frame = frame
            else:
                ds_frame = Frame(
                    np.clip(resize_array(frame.data, ds_h, ds_w), 0.0, 1.0), check=False
                )
            cache_ok = (
                self._cache is not None
                and (self._cache.height, self._cache.width) == (ds_h, ds_w)
            )
            reuse = config.theta_l if (config.theta_l > 0 and cache_ok) else 0
            action = ACTION_PARTIAL if reuse > 0 else ACTION_FULL
            gamma_ds, self._cache = forward_partial(self.spec, ds_frame, self._cache, reuse)
            if (gamma_ds.height, gamma_ds.width) == (frame.height, frame.width):
                gamma_data = gamma_ds.data
            else:
                gmin, gmax = self.spec.gamma_range
                gamma_data = np.clip(
                    resize_array(gamma_ds.data, frame.height, frame.width), gmin, gmax
                )
            self._gamma_full = GammaMap(gamma_data, bounds=self.spec.gamma_range, check=False)
            self._since_compute = 0
            executed = list(range(reuse, self.spec.layer_count))
        else:
            action = ACTION_REUSE
            self._since_compute += 1
            executed = []
        out = apply_gamma_curve(frame, self._gamma_full)
        self.executed_log.append(executed)
        latency_ms = (time.perf_counter() - start) * 1000.0
        return out, FramePlan(idx, action, config.theta_d), latency_ms


def enhance_sequence(seq: FrameSequence, spec: NetworkSpec, config: ReuseConfig):
    """Enhance a whole sequence under one config.

    Returns (enhanced sequence, per-frame plans, per-frame wall latency in ms).
    """
    enhancer = StreamEnhancer(spec)
    frames = []
    plans = []
    latencies = []
    for frame in seq:
        out, plan, ms = enhancer.process(frame, config)
        frames.append(out)
        plans.append(plan)
        latencies.append(ms)
    return FrameSequence(frames, seq.frame_rate), plans, latencies
