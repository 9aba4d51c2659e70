"""Stub trainer for the controller's (Q, E) regressor.

Fits the two-fully-connected-layer predictor on synthetic data in the
400-sample format (feature vector of two 16x16 luminance thumbnails ->
one (Q, E) pair per reuse config) and exports the engine's regressor
JSON. Real deployments would collect the samples from profiler runs;
this script only exercises the format end to end.
"""

import argparse
import json
import sys

import numpy as np
import torch
from torch import nn

FEATURE_DIM = 512
N_CONFIGS = 132
N_SAMPLES = 400


def synthetic_samples(rng, n_samples=N_SAMPLES):
    """Features plus smooth synthetic (Q, E) targets per config."""
    feats = rng.uniform(0.0, 1.0, size=(n_samples, FEATURE_DIM))
    proj = rng.normal(size=(FEATURE_DIM, 2)) / np.sqrt(FEATURE_DIM)
    base = feats @ proj
    q_cfg = rng.uniform(0.3, 1.0, size=N_CONFIGS)
    e_cfg = rng.uniform(10.0, 100.0, size=N_CONFIGS)
    targets = np.empty((n_samples, 2 * N_CONFIGS))
    targets[:, 0::2] = np.clip(q_cfg[None, :] + 0.1 * base[:, :1], 0.0, 1.0)
    targets[:, 1::2] = np.maximum(e_cfg[None, :] * (1.0 + 0.2 * base[:, 1:]), 0.0)
    return feats, targets


def fit(feats, targets, hidden=32, steps=400, lr=1e-2, seed=0):
    torch.manual_seed(seed)
    x = torch.from_numpy(feats)
    y = torch.from_numpy(targets)
    net = nn.Sequential(
        nn.Linear(FEATURE_DIM, hidden), nn.ReLU(), nn.Linear(hidden, 2 * N_CONFIGS)
    ).double()
    opt = torch.optim.Adam(net.parameters(), lr=lr)
    for _ in range(steps):
        opt.zero_grad()
        loss = ((net(x) - y) ** 2).mean()
        loss.backward()
        opt.step()
    return net, float(loss.detach())


def export(net, path):
    lin1, _, lin2 = net
    doc = {
        "version": 1,
        "input_dim": FEATURE_DIM,
        "hidden_dim": lin1.out_features,
        "output_dim": lin2.out_features,
        "w1": lin1.weight.detach().reshape(-1).tolist(),
        "b1": lin1.bias.detach().tolist(),
        "w2": lin2.weight.detach().reshape(-1).tolist(),
        "b2": lin2.bias.detach().tolist(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="regressor JSON path")
    parser.add_argument("--hidden", type=int, default=32)
    parser.add_argument("--steps", type=int, default=400)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    feats, targets = synthetic_samples(rng)
    net, loss = fit(feats, targets, hidden=args.hidden, steps=args.steps, seed=args.seed)
    export(net, args.out)
    print(f"fit {N_SAMPLES} synthetic samples, final MSE {loss:.4f}, wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
