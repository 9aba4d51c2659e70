"""Core frame containers shared by every stage of the pipeline."""

from dataclasses import dataclass, field

import numpy as np

# Rec. 601 luma weights, used for flow, SSIM, and brightness metrics.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(eq=False)
class Frame:
    """One RGB image: (H, W, 3) float64 array with channels in [0, 1].

    Validation runs on construction; pass ``check=False`` only for data
    already known valid (hot paths) or deliberately out-of-range fixtures.
    """

    data: np.ndarray
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 3 or self.data.shape[2] != 3:
            raise ValueError(f"frame data must be (H, W, 3), got {self.data.shape}")
        if self.data.shape[0] < 1 or self.data.shape[1] < 1:
            raise ValueError("frame has zero-sized dimension")
        if self.check:
            self.validate()

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    def validate(self) -> None:
        if not np.all(np.isfinite(self.data)):
            raise ValueError("frame contains non-finite values")
        lo = float(self.data.min())
        hi = float(self.data.max())
        if lo < 0.0 or hi > 1.0:
            raise ValueError(f"frame channels outside [0, 1]: min={lo}, max={hi}")


@dataclass(eq=False)
class FrameSequence:
    """Temporally ordered frames of identical size, with optional frame rate."""

    frames: list
    frame_rate: float | None = None

    def __post_init__(self):
        if not self.frames:
            raise ValueError("frame sequence is empty")
        h, w = self.frames[0].height, self.frames[0].width
        for i, f in enumerate(self.frames):
            if (f.height, f.width) != (h, w):
                raise ValueError(
                    f"frame {i} has dimensions {f.height}x{f.width}, expected {h}x{w}"
                )

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    @property
    def height(self) -> int:
        return self.frames[0].height

    @property
    def width(self) -> int:
        return self.frames[0].width


def luminance(data: np.ndarray) -> np.ndarray:
    """Rec. 601 luma of an (H, W, 3) array, returned as (H, W)."""
    r, g, b = LUMA_WEIGHTS
    return r * data[:, :, 0] + g * data[:, :, 1] + b * data[:, :, 2]


def require_same_dims(a: Frame, b: Frame) -> None:
    if (a.height, a.width) != (b.height, b.width):
        raise ValueError(
            f"dimension mismatch: {a.height}x{a.width} vs {b.height}x{b.width}"
        )
