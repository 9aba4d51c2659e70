"""Dense optical flow and backward warping for temporal alignment.

The estimator follows the classic two-frame polynomial-expansion
approach: each luminance neighborhood is fit with a local quadratic
f(u) = u'Au + b'u + c under a Gaussian applicability window, and the
per-pixel displacement solving f_t(x + d) = f_t1(x) is recovered from
the expansion coefficients, refined iteratively over a two-level
pyramid. Textureless regions (singular normal equations) fall back to
zero displacement.
"""

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from . import kernels
from .frames import Frame, luminance, require_same_dims
from .imageio import resize_array

POLY_RADIUS = 3  # 7-tap expansion window
POLY_SIGMA = 1.5
AVG_RADIUS = 7  # 15-tap averaging window
AVG_SIGMA = 2.5
PYRAMID_LEVELS = 2
ITERATIONS = 3
_DET_EPS = 1e-9


@dataclass(eq=False)
class FlowField:
    """Per-pixel (dx, dy) displacements, shape (H, W, 2)."""

    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 3 or self.data.shape[2] != 2:
            raise ValueError(f"flow field must be (H, W, 2), got {self.data.shape}")
        if not np.all(np.isfinite(self.data)):
            raise ValueError("flow field contains non-finite values")

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @classmethod
    def zeros(cls, height: int, width: int) -> "FlowField":
        return cls(np.zeros((height, width, 2)))


def _gaussian(radius: int, sigma: float) -> np.ndarray:
    k = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-0.5 * (k / sigma) ** 2)
    return g / g.sum()


def _poly_expand(img: np.ndarray):
    """Quadratic expansion coefficients A (2x2 symmetric) and b per pixel.

    Returns (a11, a12, a22, b1, b2) where the local model around each
    pixel is f(u) = u'Au + b'u + c with u = (x, y) window offsets.
    """
    k = np.arange(-POLY_RADIUS, POLY_RADIUS + 1, dtype=np.float64)
    g = _gaussian(POLY_RADIUS, POLY_SIGMA)
    g1 = g * k
    g2 = g * k * k

    def cy(image, w):
        return correlate1d(image, w, axis=0, mode="nearest")

    def cx(image, w):
        return correlate1d(image, w, axis=1, mode="nearest")

    f0 = cy(img, g)
    f1 = cy(img, g1)
    f2 = cy(img, g2)
    m00 = cx(f0, g)
    m10 = cx(f0, g1)
    m20 = cx(f0, g2)
    m01 = cx(f1, g)
    m11 = cx(f1, g1)
    m02 = cx(f2, g)

    # Gram matrix of the basis [1, x, y, x^2, y^2, xy] under the separable
    # applicability; only four distinct moments survive by symmetry.
    s2 = float((g * k * k).sum())
    s4 = float((g * k ** 4).sum())
    s22 = s2 * s2
    gram = np.array(
        [
            [1.0, 0.0, 0.0, s2, s2, 0.0],
            [0.0, s2, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, s2, 0.0, 0.0, 0.0],
            [s2, 0.0, 0.0, s4, s22, 0.0],
            [s2, 0.0, 0.0, s22, s4, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, s22],
        ]
    )
    ginv = np.linalg.inv(gram)
    moments = np.stack([m00, m10, m01, m20, m02, m11], axis=-1)
    r = moments @ ginv.T
    b1 = r[..., 1]
    b2 = r[..., 2]
    a11 = r[..., 3]
    a22 = r[..., 4]
    a12 = 0.5 * r[..., 5]
    return a11, a12, a22, b1, b2


def _displacement_pass(exp_t, exp_t1, prior: np.ndarray) -> np.ndarray:
    """One solve for d with f_t's expansion sampled at the prior guess."""
    a11_t, a12_t, a22_t, b1_t, b2_t = exp_t
    a11_s, a12_s, a22_s, b1_s, b2_s = exp_t1
    h, w = b1_t.shape
    yy, xx = np.meshgrid(np.arange(h), np.arange(w), indexing="ij")
    sx = np.clip(xx + np.rint(prior[:, :, 0]).astype(np.intp), 0, w - 1)
    sy = np.clip(yy + np.rint(prior[:, :, 1]).astype(np.intp), 0, h - 1)

    a11 = 0.5 * (a11_t[sy, sx] + a11_s)
    a12 = 0.5 * (a12_t[sy, sx] + a12_s)
    a22 = 0.5 * (a22_t[sy, sx] + a22_s)
    db1 = 0.5 * (b1_s - b1_t[sy, sx]) + a11 * prior[:, :, 0] + a12 * prior[:, :, 1]
    db2 = 0.5 * (b2_s - b2_t[sy, sx]) + a12 * prior[:, :, 0] + a22 * prior[:, :, 1]

    # Normal equations of A d = db, averaged over the smoothing window.
    g11 = a11 * a11 + a12 * a12
    g12 = a12 * (a11 + a22)
    g22 = a12 * a12 + a22 * a22
    h1 = a11 * db1 + a12 * db2
    h2 = a12 * db1 + a22 * db2

    g = _gaussian(AVG_RADIUS, AVG_SIGMA)

    def smooth(image):
        return correlate1d(correlate1d(image, g, axis=0, mode="nearest"), g, axis=1, mode="nearest")

    g11, g12, g22, h1, h2 = (smooth(im) for im in (g11, g12, g22, h1, h2))
    det = g11 * g22 - g12 * g12
    safe = np.abs(det) > _DET_EPS
    inv_det = np.where(safe, 1.0 / np.where(safe, det, 1.0), 0.0)
    dx = np.where(safe, (g22 * h1 - g12 * h2) * inv_det, 0.0)
    dy = np.where(safe, (g11 * h2 - g12 * h1) * inv_det, 0.0)
    return np.stack([dx, dy], axis=-1)


def _estimate_level(lum_t: np.ndarray, lum_t1: np.ndarray, init: np.ndarray) -> np.ndarray:
    exp_t = _poly_expand(lum_t)
    exp_t1 = _poly_expand(lum_t1)
    d = init
    for _ in range(ITERATIONS):
        d = _displacement_pass(exp_t, exp_t1, d)
    return d


def estimate_flow(frame_t: Frame, frame_t1: Frame) -> FlowField:
    """Dense displacements such that frame_t(x + dx, y + dy) matches frame_t1(x, y)."""
    require_same_dims(frame_t, frame_t1)
    lum_t = luminance(frame_t.data)
    lum_t1 = luminance(frame_t1.data)
    h, w = lum_t.shape

    min_dim = 2 * (2 * POLY_RADIUS + 1)
    if PYRAMID_LEVELS > 1 and min(h, w) >= min_dim:
        h2, w2 = h // 2, w // 2
        lum_t_c = resize_array(lum_t[:, :, None], h2, w2)[:, :, 0]
        lum_t1_c = resize_array(lum_t1[:, :, None], h2, w2)[:, :, 0]
        d = _estimate_level(lum_t_c, lum_t1_c, np.zeros((h2, w2, 2)))
        d = resize_array(2.0 * d, h, w)
    else:
        d = np.zeros((h, w, 2))
    d = _estimate_level(lum_t, lum_t1, d)
    return FlowField(d)


def warp(frame: Frame, flow: FlowField) -> Frame:
    """Bilinear backward warp; out-of-bounds samples clamp to the edge."""
    if (frame.height, frame.width) != (flow.height, flow.width):
        raise ValueError(
            f"dimension mismatch: frame {frame.height}x{frame.width}"
            f" vs flow {flow.height}x{flow.width}"
        )
    if np.all(flow.data == 0.0):
        return Frame(frame.data.copy(), check=False)
    out = kernels.warp_bilinear(frame.data, np.ascontiguousarray(flow.data))
    return Frame(np.clip(out, 0.0, 1.0), check=False)
