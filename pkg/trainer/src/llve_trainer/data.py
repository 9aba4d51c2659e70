"""Toy-scale data loading: a directory of images and a directory of
adjacent-frame pairs (one subdirectory per clip, frames ordered by
filename; a flat directory is paired off two by two)."""

import os

import numpy as np
import torch
from PIL import Image

IMAGE_EXTS = (".png", ".ppm", ".jpg", ".jpeg")


def _list_images(directory: str):
    names = sorted(
        n for n in os.listdir(directory) if os.path.splitext(n)[1].lower() in IMAGE_EXTS
    )
    return [os.path.join(directory, n) for n in names]


def load_image(path: str, size: tuple | None = None) -> torch.Tensor:
    """Load as a (3, H, W) float64 tensor in [0, 1], optionally resized."""
    img = Image.open(path).convert("RGB")
    if size is not None:
        img = img.resize((size[1], size[0]), Image.BILINEAR)
    arr = np.asarray(img, dtype=np.float64) / 255.0
    return torch.from_numpy(arr.transpose(2, 0, 1).copy())


def load_image_dir(directory: str, size: tuple | None = None) -> torch.Tensor:
    paths = _list_images(directory)
    if not paths:
        raise ValueError(f"{directory}: no images found")
    return torch.stack([load_image(p, size) for p in paths])


def load_pairs(directory: str, size: tuple | None = None):
    """Adjacent frame pairs as a list of (frame_t, frame_t1) tensors."""
    subdirs = sorted(
        d for d in os.listdir(directory) if os.path.isdir(os.path.join(directory, d))
    )
    pairs = []
    if subdirs:
        for sub in subdirs:
            paths = _list_images(os.path.join(directory, sub))
            for a, b in zip(paths, paths[1:]):
                pairs.append((load_image(a, size), load_image(b, size)))
    else:
        paths = _list_images(directory)
        for a, b in zip(paths[0::2], paths[1::2]):
            pairs.append((load_image(a, size), load_image(b, size)))
    if not pairs:
        raise ValueError(f"{directory}: no frame pairs found")
    return pairs
