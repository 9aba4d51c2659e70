"""Siamese training loop.

Each step feeds one batch of low-light images and one batch of adjacent
low-light frame pairs through the same network (shared weights): the
images drive the zero-reference enhancement losses, the pairs drive the
temporal consistency losses after flow alignment, and both are summed
into a single Adam step. The exported weights file loads directly in
the inference engine.

Temporal sums are normalized per pixel inside the total so the default
weights alpha = beta = 1 keep both sides comparable; the raw sums stay
available from losses.temporal_losses.
"""

import argparse
import sys
from dataclasses import dataclass, field

import torch

from .data import load_image_dir, load_pairs
from .flow import estimate_flow
from .losses import temporal_losses, zero_dce_total
from .model import GammaNet, export_weights, zero_init


@dataclass
class TrainConfig:
    image_dir: str
    video_pairs_dir: str
    export_path: str
    alpha: float = 1.0
    beta: float = 1.0
    learning_rate: float = 1e-4
    batch_size: int = 4
    epochs: int = 10
    input_size: tuple = (256, 256)
    log_path: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError("temporal loss weights must be non-negative")
        if self.input_size[0] < 1 or self.input_size[1] < 1:
            raise ValueError("input size must be positive")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch size must be >= 1")


def siamese_step(net, optimizer, images, pairs, alpha, beta):
    """One combined update; ``pairs`` is a list of (t, t1, flow) triples.

    Returns the component losses as floats (temporal values per-pixel).
    """
    if images.shape[0] == 0 and not pairs:
        raise ValueError("empty batch")
    optimizer.zero_grad()
    zero = images.new_zeros(())

    l_zdce = zero
    if images.shape[0] > 0:
        gamma = net(images)
        enhanced = images ** gamma
        l_zdce = zero_dce_total(enhanced, images, gamma)

    l_exp_t = zero
    l_col_t = zero
    for frame_t, frame_t1, flow in pairs:
        e_t = frame_t ** net(frame_t.unsqueeze(0)).squeeze(0)
        e_t1 = frame_t1 ** net(frame_t1.unsqueeze(0)).squeeze(0)
        exp_sum, col_sum = temporal_losses(e_t1, e_t, flow)
        n_px = frame_t.shape[1] * frame_t.shape[2]
        l_exp_t = l_exp_t + exp_sum / n_px
        l_col_t = l_col_t + col_sum / n_px
    if pairs:
        l_exp_t = l_exp_t / len(pairs)
        l_col_t = l_col_t / len(pairs)

    total = l_zdce + alpha * l_exp_t + beta * l_col_t
    total.backward()
    optimizer.step()
    return {
        "L_total": float(total.detach()),
        "L_zdce": float(l_zdce.detach()),
        "L_exp_t": float(l_exp_t.detach()),
        "L_col_t": float(l_col_t.detach()),
    }


def train(cfg: TrainConfig):
    """Run the full loop; returns the per-epoch mean loss history."""
    torch.manual_seed(cfg.seed)
    images = load_image_dir(cfg.image_dir, cfg.input_size)
    raw_pairs = load_pairs(cfg.video_pairs_dir, cfg.input_size)
    # input frames never change, so alignment is computed once
    pairs = [(t, t1, estimate_flow(t, t1)) for t, t1 in raw_pairs]

    net = zero_init(GammaNet())
    optimizer = torch.optim.Adam(net.parameters(), lr=cfg.learning_rate)

    history = []
    log_rows = ["epoch,L_total,L_zdce,L_exp_t,L_col_t"]
    n_imgs = images.shape[0]
    steps = max(1, (n_imgs + cfg.batch_size - 1) // cfg.batch_size)
    for epoch in range(1, cfg.epochs + 1):
        perm = torch.randperm(n_imgs)
        epoch_stats = []
        for s in range(steps):
            idx = perm[s * cfg.batch_size : (s + 1) * cfg.batch_size]
            pair_lo = (s * cfg.batch_size) % len(pairs)
            pair_batch = [pairs[(pair_lo + i) % len(pairs)] for i in range(cfg.batch_size)]
            epoch_stats.append(
                siamese_step(net, optimizer, images[idx], pair_batch, cfg.alpha, cfg.beta)
            )
        means = {
            k: sum(st[k] for st in epoch_stats) / len(epoch_stats) for k in epoch_stats[0]
        }
        history.append(means)
        log_rows.append(
            f"{epoch},{means['L_total']},{means['L_zdce']},{means['L_exp_t']},{means['L_col_t']}"
        )

    if cfg.log_path:
        with open(cfg.log_path, "w") as fh:
            fh.write("\n".join(log_rows) + "\n")
    export_weights(net, cfg.export_path)
    return net, history


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="llve-train", description=__doc__)
    parser.add_argument("--images", required=True, help="directory of low-light images")
    parser.add_argument("--pairs", required=True, help="directory of adjacent-frame pairs")
    parser.add_argument("--export", required=True, help="output weights JSON")
    parser.add_argument("--epochs", type=int, default=10)
    parser.add_argument("--batch-size", type=int, default=4)
    parser.add_argument("--lr", type=float, default=1e-4)
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--beta", type=float, default=1.0)
    parser.add_argument("--size", type=int, default=256, help="square training resolution")
    parser.add_argument("--log", default=None, help="CSV loss log path")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    cfg = TrainConfig(
        image_dir=args.images,
        video_pairs_dir=args.pairs,
        export_path=args.export,
        alpha=args.alpha,
        beta=args.beta,
        learning_rate=args.lr,
        batch_size=args.batch_size,
        epochs=args.epochs,
        input_size=(args.size, args.size),
        log_path=args.log,
        seed=args.seed,
    )
    _, history = train(cfg)
    print(f"epoch 1 mean L_total: {history[0]['L_total']:.4f}")
    print(f"epoch {len(history)} mean L_total: {history[-1]['L_total']:.4f}")
    print(f"weights written to {cfg.export_path}")
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
