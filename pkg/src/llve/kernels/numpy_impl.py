"""Pure-numpy reference implementations of the hot kernels.

Accumulation order matches numba_impl (bias, then ci/ky/kx) so both
backends produce bit-identical float64 results.
"""

import numpy as np


def conv2d(x, w, b, stride=1, groups=1):
    """2-D convolution (cross-correlation) on a pre-padded CHW tensor.

    x: (Cin, H, W) float64, already padded by the caller.
    w: (Cout, Cin/groups, K, K); b: (Cout,).
    Returns (Cout, Ho, Wo) with Ho = (H - K) // stride + 1.
    """
    cin, h, w_in = x.shape
    cout, cin_g, k, _ = w.shape
    ho = (h - k) // stride + 1
    wo = (w_in - k) // stride + 1
    cpg = cout // groups
    out = np.empty((cout, ho, wo), dtype=np.float64)
    for co in range(cout):
        g = co // cpg
        acc = np.full((ho, wo), b[co], dtype=np.float64)
        for ci in range(cin_g):
            plane = x[g * cin_g + ci]
            for ky in range(k):
                for kx in range(k):
                    acc += w[co, ci, ky, kx] * plane[
                        ky : ky + stride * ho : stride, kx : kx + stride * wo : stride
                    ]
        out[co] = acc
    return out


def bilinear_resize(src, out_h, out_w):
    """Resize an (H, W, C) array with bilinear sampling.

    Sample centers sit at (i + 0.5) / N of the image extent; source
    coordinates are clamped to the valid range (edge clamp).
    """
    h, w, _ = src.shape
    if out_h == h and out_w == w:
        return src.copy()
    ys = np.clip((np.arange(out_h, dtype=np.float64) + 0.5) * (h / out_h) - 0.5, 0.0, h - 1.0)
    xs = np.clip((np.arange(out_w, dtype=np.float64) + 0.5) * (w / out_w) - 0.5, 0.0, w - 1.0)
    y0 = np.floor(ys).astype(np.intp)
    x0 = np.floor(xs).astype(np.intp)
    wy = (ys - y0)[:, None, None]
    wx = (xs - x0)[None, :, None]
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    v00 = src[np.ix_(y0, x0)]
    v01 = src[np.ix_(y0, x1)]
    v10 = src[np.ix_(y1, x0)]
    v11 = src[np.ix_(y1, x1)]
    return (1.0 - wy) * ((1.0 - wx) * v00 + wx * v01) + wy * ((1.0 - wx) * v10 + wx * v11)


def warp_bilinear(src, flow):
    """Backward-warp an (H, W, C) array by per-pixel (dx, dy) displacements.

    out[y, x] samples src at (x + dx, y + dy), bilinear, edge-clamped.
    """
    h, w, _ = src.shape
    yy, xx = np.meshgrid(np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij")
    sx = np.clip(xx + flow[:, :, 0], 0.0, w - 1.0)
    sy = np.clip(yy + flow[:, :, 1], 0.0, h - 1.0)
    x0 = np.floor(sx).astype(np.intp)
    y0 = np.floor(sy).astype(np.intp)
    wx = (sx - x0)[:, :, None]
    wy = (sy - y0)[:, :, None]
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    v00 = src[y0, x0]
    v01 = src[y0, x1]
    v10 = src[y1, x0]
    v11 = src[y1, x1]
    return (1.0 - wy) * ((1.0 - wx) * v00 + wx * v01) + wy * ((1.0 - wx) * v10 + wx * v11)


def pow_map(img, exponents):
    """Elementwise img ** exponents for same-shaped arrays."""
    return np.power(img, exponents)
