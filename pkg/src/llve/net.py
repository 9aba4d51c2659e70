"""Forward pass of the tiny densely linked conv network that predicts gamma maps.

The layer list mixes conv and activation entries. Each layer consumes a
concatenation of earlier tensors (``dense_inputs``, where tensor 0 is
the raw RGB input and tensor i is the output of layer i-1), so later
layers always see the current frame even when early outputs are reused
from a cache. The final 3-channel raw output y maps to exponents via
g = exp(clamp(y, ln g_min, ln g_max)), making all-zero weights the
identity enhancement.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .curves import GAMMA_MAX, GAMMA_MIN, GammaMap
from .frames import Frame

WEIGHTS_FORMAT_VERSION = 1


@dataclass(eq=False)
class LayerSpec:
    kind: str  # "conv" or "activation"
    k: int = 1
    cin: int = 1
    cout: int = 1
    stride: int = 1
    padding: int = 0
    groups: int = 1
    dense_inputs: tuple = (0,)
    weights: np.ndarray | None = None
    bias: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("conv", "activation"):
            raise ValueError(f"unknown layer kind {self.kind!r}")
        if self.k < 1 or self.cin < 1 or self.cout < 1:
            raise ValueError("layer dimensions must be >= 1")
        if self.stride < 1 or self.padding < 0:
            raise ValueError("invalid stride/padding")
        if self.cin % self.groups or self.cout % self.groups:
            raise ValueError(f"groups={self.groups} must divide cin={self.cin} and cout={self.cout}")
        self.dense_inputs = tuple(int(i) for i in self.dense_inputs)
        if self.kind == "conv":
            wshape = (self.cout, self.cin // self.groups, self.k, self.k)
            self.weights = np.asarray(self.weights, dtype=np.float64)
            if self.weights.shape != wshape:
                raise ValueError(f"weights shape {self.weights.shape} != {wshape}")
            self.bias = np.asarray(self.bias, dtype=np.float64)
            if self.bias.shape != (self.cout,):
                raise ValueError(f"bias shape {self.bias.shape} != ({self.cout},)")
        else:
            if self.cout != self.cin:
                raise ValueError("activation layers keep their channel count")
            if self.weights is not None or self.bias is not None:
                raise ValueError("activation layers carry no weights")


@dataclass(eq=False)
class NetworkSpec:
    layers: list
    gamma_range: tuple = (GAMMA_MIN, GAMMA_MAX)

    def __post_init__(self):
        gmin, gmax = self.gamma_range
        if not (0.0 < gmin <= gmax):
            raise ValueError(f"invalid gamma range [{gmin}, {gmax}]")
        self.gamma_range = (float(gmin), float(gmax))
        if not self.layers:
            raise ValueError("network has no layers")
        # Tensor 0 is the 3-channel input; tensor i+1 is layer i's output.
        channels = [3]
        for i, layer in enumerate(self.layers):
            for j in layer.dense_inputs:
                if not 0 <= j <= i:
                    raise ValueError(f"layer {i} references unavailable tensor {j}")
            total = sum(channels[j] for j in layer.dense_inputs)
            if total != layer.cin:
                raise ValueError(
                    f"layer {i} cin={layer.cin} but dense inputs supply {total} channels"
                )
            channels.append(layer.cout)
        if channels[-1] != 3:
            raise ValueError(f"final tensor must have 3 channels, got {channels[-1]}")

    @property
    def layer_count(self) -> int:
        return len(self.layers)


@dataclass(eq=False)
class ActivationCache:
    """Per-layer output tensors from one forward pass at one resolution."""

    outputs: list
    height: int
    width: int


def _pad_spatial(x: np.ndarray, p: int) -> np.ndarray:
    if p == 0:
        return x
    # Reflect keeps constant inputs constant through the borders; tiny
    # images that cannot reflect fall back to edge replication.
    mode = "reflect" if x.shape[1] > p and x.shape[2] > p else "edge"
    return np.pad(x, ((0, 0), (p, p), (p, p)), mode=mode)


def _execute(spec: NetworkSpec, data_hwc: np.ndarray, cache: ActivationCache | None, reuse: int):
    x0 = np.ascontiguousarray(data_hwc.transpose(2, 0, 1))
    outputs = []
    for i, layer in enumerate(spec.layers):
        if i < reuse:
            out = cache.outputs[i]
        else:
            parts = [x0 if j == 0 else outputs[j - 1] for j in layer.dense_inputs]
            inp = parts[0] if len(parts) == 1 else np.concatenate(parts, axis=0)
            if layer.kind == "conv":
                padded = _pad_spatial(inp, layer.padding)
                out = kernels.conv2d(
                    np.ascontiguousarray(padded), layer.weights, layer.bias,
                    layer.stride, layer.groups,
                )
            else:
                out = np.maximum(inp, 0.0)
        outputs.append(out)
    return outputs


def _to_gamma(spec: NetworkSpec, raw: np.ndarray, h: int, w: int) -> GammaMap:
    if raw.shape != (3, h, w):
        raise ValueError(f"network produced {raw.shape}, expected (3, {h}, {w})")
    gmin, gmax = spec.gamma_range
    gam = np.exp(np.clip(raw, np.log(gmin), np.log(gmax)))
    gam = np.clip(gam.transpose(1, 2, 0), gmin, gmax)
    return GammaMap(gam, bounds=spec.gamma_range, check=False)


def forward(spec: NetworkSpec, frame: Frame) -> GammaMap:
    """Full forward pass; returns the per-pixel exponent map."""
    outputs = _execute(spec, frame.data, None, 0)
    return _to_gamma(spec, outputs[-1], frame.height, frame.width)


def forward_partial(spec: NetworkSpec, frame: Frame, cached: ActivationCache | None, reuse_layers: int):
    """Forward pass reusing the first ``reuse_layers`` cached layer outputs.

    Layers past the reused prefix recompute against the current frame
    (tensor 0 in their dense links). Returns the gamma map and the
    refreshed cache.
    """
    if not 0 <= reuse_layers < spec.layer_count:
        raise ValueError(f"reuse_layers={reuse_layers} out of range [0, {spec.layer_count})")
    if reuse_layers > 0:
        if cached is None:
            raise ValueError("layer reuse requested but no cache available")
        if (cached.height, cached.width) != (frame.height, frame.width):
            raise ValueError(
                f"cache resolution {cached.height}x{cached.width} does not match"
                f" frame {frame.height}x{frame.width}"
            )
    outputs = _execute(spec, frame.data, cached, reuse_layers)
    gamma = _to_gamma(spec, outputs[-1], frame.height, frame.width)
    return gamma, ActivationCache(outputs, frame.height, frame.width)


def save_weights(spec: NetworkSpec, path: str) -> None:
    doc = {
        "version": WEIGHTS_FORMAT_VERSION,
        "gamma_range": list(spec.gamma_range),
        "layers": [],
    }
    for layer in spec.layers:
        entry = {
            "kind": layer.kind,
            "k": layer.k,
            "cin": layer.cin,
            "cout": layer.cout,
            "stride": layer.stride,
            "padding": layer.padding,
            "groups": layer.groups,
            "dense_inputs": list(layer.dense_inputs),
        }
        if layer.kind == "conv":
            entry["weights"] = layer.weights.ravel().tolist()
            entry["bias"] = layer.bias.tolist()
        doc["layers"].append(entry)
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_weights(path: str) -> NetworkSpec:
    """Load and validate a weights file (see save_weights for the schema)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"{path}: malformed weights file ({exc})") from exc
    try:
        version = doc["version"]
        if version != WEIGHTS_FORMAT_VERSION:
            raise ValueError(f"unsupported weights version {version}")
        gamma_range = tuple(float(v) for v in doc["gamma_range"])
        layers = []
        for i, entry in enumerate(doc["layers"]):
            kind = entry["kind"]
            weights = bias = None
            if kind == "conv":
                cout = int(entry["cout"])
                cin = int(entry["cin"])
                groups = int(entry.get("groups", 1))
                k = int(entry["k"])
                flat = np.asarray(entry["weights"], dtype=np.float64)
                expected = cout * (cin // groups) * k * k if groups and cin % groups == 0 else -1
                if flat.ndim != 1 or flat.size != expected:
                    raise ValueError(
                        f"layer {i}: weight array has {flat.size} values, expected {expected}"
                    )
                weights = flat.reshape(cout, cin // groups, k, k)
                bias = np.asarray(entry["bias"], dtype=np.float64)
            layers.append(
                LayerSpec(
                    kind=kind,
                    k=int(entry.get("k", 1)),
                    cin=int(entry["cin"]),
                    cout=int(entry["cout"]),
                    stride=int(entry.get("stride", 1)),
                    padding=int(entry.get("padding", 0)),
                    groups=int(entry.get("groups", 1)),
                    dense_inputs=entry["dense_inputs"],
                    weights=weights,
                    bias=bias,
                )
            )
        return NetworkSpec(layers, gamma_range)
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"{path}: malformed weights file ({exc})") from exc


def _conv(k, cin, cout, dense_inputs, padding, weights, bias):
    return LayerSpec(
        kind="conv", k=k, cin=cin, cout=cout, padding=padding,
        dense_inputs=dense_inputs, weights=weights, bias=bias,
    )


def _act(c, dense_inputs):
    return LayerSpec(kind="activation", cin=c, cout=c, dense_inputs=dense_inputs)


def default_spec(init: str = "zeros", seed: int = 0, scale: float = 1.0) -> NetworkSpec:
    """Build the standard three-block topology.

    Block 1: 1x1 conv (3->1) + 3x3 conv (1->1); block 2: 1x1 conv (4->1)
    + 3x3 conv (1->1); block 3: 1x1 conv (4->3). Blocks 2 and 3 take the
    raw RGB input concatenated with the previous block's output. ReLU
    after every hidden conv; both 3x3 convs pad by 1 to keep the map at
    frame resolution.

    ``init`` is "zeros" (identity enhancement) or "random" (seeded,
    small weights so raw outputs stay well inside the clamp range).
    """
    rng = np.random.default_rng(seed)

    def w_init(cout, cin_g, k):
        shape = (cout, cin_g, k, k)
        if init == "zeros":
            return np.zeros(shape)
        if init == "random":
            fan_in = cin_g * k * k
            return rng.normal(0.0, scale / np.sqrt(fan_in), size=shape)
        raise ValueError(f"unknown init {init!r}")

    def b_init(cout):
        if init == "zeros":
            return np.zeros(cout)
        # positive lean keeps hidden ReLUs from dying on typical inputs
        return rng.normal(0.1 * scale, 0.05 * scale, size=cout)

    layers = [
        _conv(1, 3, 1, (0,), 0, w_init(1, 3, 1), b_init(1)),
        _act(1, (1,)),
        _conv(3, 1, 1, (2,), 1, w_init(1, 1, 3), b_init(1)),
        _act(1, (3,)),
        _conv(1, 4, 1, (0, 4), 0, w_init(1, 4, 1), b_init(1)),
        _act(1, (5,)),
        _conv(3, 1, 1, (6,), 1, w_init(1, 1, 3), b_init(1)),
        _act(1, (7,)),
        _conv(1, 4, 3, (0, 8), 0, w_init(3, 4, 1), b_init(3)),
    ]
    return NetworkSpec(layers)
