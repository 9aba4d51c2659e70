"""Frame and sequence I/O plus resolution resampling.

Supported on disk: 8-bit PNG (RGB or RGBA, alpha dropped) and binary
PPM (P6, maxval 255). Directories of frames are ordered by filename.
"""

import os
from fractions import Fraction

import numpy as np
from PIL import Image

from . import kernels
from .frames import Frame, FrameSequence

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"

RESAMPLE_FACTORS = (Fraction(1), Fraction(1, 2), Fraction(1, 3))


def _read_ppm(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    # Header: magic, width, height, maxval as whitespace-separated tokens,
    # '#' comments allowed, then a single whitespace byte before pixel data.
    pos = 0

    def next_token():
        nonlocal pos
        while pos < len(raw):
            c = raw[pos : pos + 1]
            if c == b"#":
                while pos < len(raw) and raw[pos : pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif c.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"{path}: truncated PPM header")
        return raw[start:pos]

    if next_token() != b"P6":
        raise ValueError(f"{path}: not a binary PPM (P6) file")
    width = int(next_token())
    height = int(next_token())
    maxval = int(next_token())
    if maxval != 255:
        raise ValueError(f"{path}: only 8-bit PPM supported, maxval={maxval}")
    if width < 1 or height < 1:
        raise ValueError(f"{path}: zero-dimension image")
    pos += 1
    pixels = raw[pos : pos + width * height * 3]
    if len(pixels) != width * height * 3:
        raise ValueError(f"{path}: truncated PPM pixel data")
    return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width, 3)


def _read_png(path: str) -> np.ndarray:
    try:
        img = Image.open(path)
        img.load()
    except Exception as exc:
        raise ValueError(f"{path}: unreadable PNG ({exc})") from exc
    if img.mode not in ("RGB", "RGBA"):
        raise ValueError(f"{path}: unsupported PNG mode {img.mode!r} (need 8-bit RGB/RGBA)")
    arr = np.asarray(img, dtype=np.uint8)
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{path}: zero-dimension image")
    return arr[:, :, :3]


def load_frame(path: str) -> Frame:
    """Load one 8-bit image; channels map to [0, 1] as v / 255."""
    if not os.path.isfile(path):
        raise ValueError(f"{path}: no such file")
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head.startswith(_PNG_MAGIC):
        arr = _read_png(path)
    elif head.startswith(b"P6"):
        arr = _read_ppm(path)
    else:
        raise ValueError(f"{path}: unsupported format (need PNG or binary PPM)")
    return Frame(arr.astype(np.float64) / 255.0, check=False)


def quantize_8bit(data: np.ndarray) -> np.ndarray:
    """Map [0, 1] floats to uint8 with round-half-up; out-of-range values clamp."""
    q = np.floor(np.clip(data, 0.0, 1.0) * 255.0 + 0.5)
    return np.clip(q, 0, 255).astype(np.uint8)


def save_frame(frame: Frame, path: str) -> None:
    """Write a frame as 8-bit PNG or PPM, chosen by file extension."""
    arr = quantize_8bit(frame.data)
    ext = os.path.splitext(path)[1].lower()
    if ext == ".ppm":
        header = f"P6\n{arr.shape[1]} {arr.shape[0]}\n255\n".encode("ascii")
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(arr.tobytes())
    elif ext == ".png":
        Image.fromarray(arr, mode="RGB").save(path, format="PNG")
    else:
        raise ValueError(f"{path}: unsupported output extension {ext!r} (use .png or .ppm)")


def load_sequence(directory: str) -> FrameSequence:
    """Load every PNG/PPM in a directory, ordered by lexicographic filename."""
    if not os.path.isdir(directory):
        raise ValueError(f"{directory}: no such directory")
    names = sorted(
        n for n in os.listdir(directory) if os.path.splitext(n)[1].lower() in (".png", ".ppm")
    )
    if not names:
        raise ValueError(f"{directory}: no PNG/PPM frames found")
    frames = [load_frame(os.path.join(directory, n)) for n in names]
    return FrameSequence(frames)


def resize_array(data: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resize of an (H, W, C) array; shared by frames and gamma maps."""
    if out_h < 1 or out_w < 1:
        raise ValueError(f"degenerate output size {out_h}x{out_w}")
    return kernels.bilinear_resize(np.ascontiguousarray(data, dtype=np.float64), out_h, out_w)


def resample(frame: Frame, factor) -> Frame:
    """Resample a frame by a rate in {1, 1/2, 1/3} or to explicit (height, width).

    Downsampling by a rate yields floor(rate * dim); a (height, width)
    target is honored exactly. Identity factors return an equal copy.
    """
    if isinstance(factor, tuple):
        out_h, out_w = int(factor[0]), int(factor[1])
    else:
        f = Fraction(factor)
        if f not in RESAMPLE_FACTORS:
            raise ValueError(f"resample rate must be one of {{1, 1/2, 1/3}}, got {factor}")
        out_h = int(f * frame.height)
        out_w = int(f * frame.width)
    if out_h < 1 or out_w < 1:
        raise ValueError(f"degenerate output size {out_h}x{out_w}")
    out = resize_array(frame.data, out_h, out_w)
    return Frame(np.clip(out, 0.0, 1.0), check=False)
