"""Pixel-wise enhancement curves.

The production mapping is a single power law per pixel and channel,
out = in ** g with g > 0 (g < 1 brightens, g > 1 darkens). The
iterative quadratic curve out_n = out_{n-1} + a * out_{n-1} * (1 - out_{n-1})
is kept as the comparison baseline for ablations.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .frames import Frame, require_same_dims

GAMMA_MIN = 0.25
GAMMA_MAX = 4.0


@dataclass(eq=False)
class GammaMap:
    """Per-pixel, per-channel positive exponents, shape (H, W, 3).

    ``bounds`` is the configured exponent range; maps produced by the
    network carry its clamp range, hand-built maps may pass None to skip
    the range check (positivity is always enforced).
    """

    data: np.ndarray
    bounds: tuple | None = (GAMMA_MIN, GAMMA_MAX)
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 3 or self.data.shape[2] != 3:
            raise ValueError(f"gamma map must be (H, W, 3), got {self.data.shape}")
        if self.check:
            if not np.all(np.isfinite(self.data)):
                raise ValueError("gamma map contains non-finite values")
            lo = float(self.data.min())
            if lo <= 0.0:
                raise ValueError(f"gamma exponents must be strictly positive, min={lo}")
            if self.bounds is not None:
                gmin, gmax = self.bounds
                hi = float(self.data.max())
                if lo < gmin or hi > gmax:
                    raise ValueError(
                        f"gamma exponents outside configured range [{gmin}, {gmax}]:"
                        f" min={lo}, max={hi}"
                    )

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


@dataclass(eq=False)
class CurveParamMap:
    """Quadratic-curve parameter map, values in [-1, 1], shape (H, W, 3)."""

    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 3 or self.data.shape[2] != 3:
            raise ValueError(f"curve parameter map must be (H, W, 3), got {self.data.shape}")
        if not np.all(np.isfinite(self.data)):
            raise ValueError("curve parameters contain non-finite values")
        amax = float(np.abs(self.data).max())
        if amax > 1.0:
            raise ValueError(f"curve parameters must satisfy |a| <= 1, max |a| = {amax}")

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


def apply_gamma_curve(frame: Frame, gamma: GammaMap) -> Frame:
    """Raise each channel to its per-pixel exponent; 0 ** g is 0."""
    if (frame.height, frame.width) != (gamma.height, gamma.width):
        raise ValueError(
            f"dimension mismatch: frame {frame.height}x{frame.width}"
            f" vs gamma map {gamma.height}x{gamma.width}"
        )
    out = kernels.pow_map(frame.data, gamma.data)
    return Frame(out, check=False)


def apply_quadratic_curve(frame: Frame, params, iterations: int | None = None, *, reuse_single: bool = False) -> Frame:
    """Iterate the quadratic adjustment curve starting from the input frame.

    ``params`` is a list of CurveParamMap, one per iteration; with
    ``reuse_single`` a single map is applied ``iterations`` times.
    """
    if isinstance(params, CurveParamMap):
        params = [params]
    if not params:
        raise ValueError("need at least one curve parameter map")
    if reuse_single:
        if len(params) != 1:
            raise ValueError("reuse_single expects exactly one parameter map")
        if iterations is None or iterations < 1:
            raise ValueError("reuse_single requires iterations >= 1")
        params = params * iterations
    elif iterations is not None and iterations != len(params):
        raise ValueError(f"{len(params)} maps given for {iterations} iterations")
    for p in params:
        if (p.height, p.width) != (frame.height, frame.width):
            raise ValueError(
                f"dimension mismatch: frame {frame.height}x{frame.width}"
                f" vs parameter map {p.height}x{p.width}"
            )
    e = frame.data
    for p in params:
        e = e + p.data * e * (1.0 - e)
    return Frame(np.clip(e, 0.0, 1.0), check=False)


def iterated_gamma(frame: Frame, gammas) -> Frame:
    """Repeated power-law application, for the iteration-count ablation only.

    Equivalent to one application with the elementwise product of the
    maps; the single-pass curve is the production path.
    """
    out = frame
    for g in gammas:
        out = apply_gamma_curve(out, g)
    return out
