import numpy as np
import pytest
import torch
from PIL import Image


def dark_pattern(rng, h, w, xoff=0.0, mean=0.15):
    yy, xx = np.meshgrid(np.arange(h, dtype=float), np.arange(w, dtype=float), indexing="ij")
    xx = xx + xoff
    v = (
        mean
        + 0.06 * np.sin(2 * np.pi * xx / 29.0)
        + 0.05 * np.cos(2 * np.pi * yy / 23.0)
        + 0.04 * np.sin(2 * np.pi * (xx + yy) / 41.0)
        + 0.02 * rng.standard_normal((h, w))
    )
    rgb = np.stack([v, 0.95 * v, 0.85 * v + 0.01], axis=-1)
    return np.clip(rgb, 0.0, 1.0)


def save_png(arr, path):
    q = np.clip(np.floor(arr * 255.0 + 0.5), 0, 255).astype(np.uint8)
    Image.fromarray(q, mode="RGB").save(path)


def to_tensor(arr):
    return torch.from_numpy(arr.transpose(2, 0, 1).copy()).double()


@pytest.fixture(scope="session")
def toy_data(tmp_path_factory):
    """16 dark images and 8 adjacent-frame pair clips at 128x128."""
    rng = np.random.default_rng(99)
    root = tmp_path_factory.mktemp("toy")
    img_dir = root / "images"
    pair_dir = root / "pairs"
    img_dir.mkdir()
    pair_dir.mkdir()
    for i in range(16):
        save_png(dark_pattern(rng, 128, 128, xoff=7.0 * i), str(img_dir / f"img{i:03d}.png"))
    for i in range(8):
        clip = pair_dir / f"clip{i:02d}"
        clip.mkdir()
        base = rng.uniform(0.0, 40.0)
        save_png(dark_pattern(rng, 128, 128, xoff=base), str(clip / "f000.png"))
        save_png(dark_pattern(rng, 128, 128, xoff=base + 2.0), str(clip / "f001.png"))
    return {"images": str(img_dir), "pairs": str(pair_dir)}


@pytest.fixture
def rng():
    return np.random.default_rng(4321)
