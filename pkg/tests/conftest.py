import numpy as np
import pytest

from llve.frames import Frame, FrameSequence


def textured_array(h, w, xoff=0.0, yoff=0.0):
    """Smooth multi-frequency pattern with unambiguous local structure."""
    yy, xx = np.meshgrid(np.arange(h, dtype=float), np.arange(w, dtype=float), indexing="ij")
    xx = xx + xoff
    yy = yy + yoff
    v = (
        0.5
        + 0.18 * np.sin(2 * np.pi * xx / 23.0)
        + 0.14 * np.cos(2 * np.pi * yy / 17.0)
        + 0.10 * np.sin(2 * np.pi * (xx + yy) / 31.0)
        + 0.08 * np.cos(2 * np.pi * (xx - 2 * yy) / 13.0)
    )
    rgb = np.stack([v, 0.9 * v + 0.05, 0.8 * v + 0.1], axis=-1)
    return np.clip(rgb, 0.0, 1.0)


def textured_frame(h, w, xoff=0.0, yoff=0.0):
    return Frame(textured_array(h, w, xoff, yoff))


def pan_sequence(n_frames, h, w, step=2.0, frame_rate=None):
    """Horizontal pan: frame t samples the pattern at x + step * t."""
    frames = [textured_frame(h, w, xoff=step * t) for t in range(n_frames)]
    return FrameSequence(frames, frame_rate)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_frame(rng):
    return Frame(rng.uniform(0.0, 1.0, size=(12, 16, 3)))
