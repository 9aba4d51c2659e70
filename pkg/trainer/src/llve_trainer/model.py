"""Torch twin of the inference engine's gamma-map network.

Same topology, same semantics: three conv blocks with dense links to
the raw RGB input, reflect padding on the 3x3 convs, ReLU between, and
a final exp(clamp(y)) mapping to per-pixel exponents. Everything runs
in float64 so exported weights reproduce the engine's outputs to
floating-point noise.
"""

import json
import math

import torch
import torch.nn.functional as F
from torch import nn

GAMMA_MIN = 0.25
GAMMA_MAX = 4.0
WEIGHTS_FORMAT_VERSION = 1


class GammaNet(nn.Module):
    def __init__(self):
        super().__init__()
        self.conv1a = nn.Conv2d(3, 1, 1)
        self.conv1b = nn.Conv2d(1, 1, 3)
        self.conv2a = nn.Conv2d(4, 1, 1)
        self.conv2b = nn.Conv2d(1, 1, 3)
        self.conv3 = nn.Conv2d(4, 3, 1)
        self.double()

    @staticmethod
    def _pad(x):
        return F.pad(x, (1, 1, 1, 1), mode="reflect")

    def raw(self, x: torch.Tensor) -> torch.Tensor:
        """Pre-clamp network output for a (B, 3, H, W) input in [0, 1]."""
        t = F.relu(self.conv1a(x))
        t = F.relu(self.conv1b(self._pad(t)))
        t = F.relu(self.conv2a(torch.cat([x, t], dim=1)))
        t = F.relu(self.conv2b(self._pad(t)))
        return self.conv3(torch.cat([x, t], dim=1))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        y = self.raw(x)
        gamma = torch.exp(torch.clamp(y, math.log(GAMMA_MIN), math.log(GAMMA_MAX)))
        return torch.clamp(gamma, GAMMA_MIN, GAMMA_MAX)

    def enhance(self, x: torch.Tensor) -> torch.Tensor:
        return x ** self.forward(x)


def zero_init(net: GammaNet) -> GammaNet:
    """All-zero weights make the exported network an identity enhancer."""
    with torch.no_grad():
        for p in net.parameters():
            p.zero_()
    return net


def _conv_entry(conv: nn.Conv2d, k: int, cin: int, cout: int, padding: int, dense_inputs):
    return {
        "kind": "conv",
        "k": k,
        "cin": cin,
        "cout": cout,
        "stride": 1,
        "padding": padding,
        "groups": 1,
        "dense_inputs": list(dense_inputs),
        "weights": conv.weight.detach().double().reshape(-1).tolist(),
        "bias": conv.bias.detach().double().reshape(-1).tolist(),
    }


def _act_entry(c: int, dense_inputs):
    return {
        "kind": "activation",
        "k": 1,
        "cin": c,
        "cout": c,
        "stride": 1,
        "padding": 0,
        "groups": 1,
        "dense_inputs": list(dense_inputs),
    }


def export_weights(net: GammaNet, path: str) -> None:
    """Write the inference engine's weights format (version 1)."""
    doc = {
        "version": WEIGHTS_FORMAT_VERSION,
        "gamma_range": [GAMMA_MIN, GAMMA_MAX],
        "layers": [
            _conv_entry(net.conv1a, 1, 3, 1, 0, (0,)),
            _act_entry(1, (1,)),
            _conv_entry(net.conv1b, 3, 1, 1, 1, (2,)),
            _act_entry(1, (3,)),
            _conv_entry(net.conv2a, 1, 4, 1, 0, (0, 4)),
            _act_entry(1, (5,)),
            _conv_entry(net.conv2b, 3, 1, 1, 1, (6,)),
            _act_entry(1, (7,)),
            _conv_entry(net.conv3, 1, 4, 3, 0, (0, 8)),
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def import_weights(net: GammaNet, path: str) -> GammaNet:
    """Load an exported file back into a torch net (inverse of export)."""
    with open(path) as fh:
        doc = json.load(fh)
    convs = [e for e in doc["layers"] if e["kind"] == "conv"]
    modules = [net.conv1a, net.conv1b, net.conv2a, net.conv2b, net.conv3]
    if len(convs) != len(modules):
        raise ValueError(f"expected {len(modules)} conv layers, found {len(convs)}")
    with torch.no_grad():
        for mod, entry in zip(modules, convs):
            w = torch.tensor(entry["weights"], dtype=torch.float64).reshape(mod.weight.shape)
            b = torch.tensor(entry["bias"], dtype=torch.float64)
            mod.weight.copy_(w)
            mod.bias.copy_(b)
    return net
