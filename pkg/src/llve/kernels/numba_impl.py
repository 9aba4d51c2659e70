"""Numba-compiled versions of the hot kernels. See numpy_impl for semantics."""

import numpy as np
from numba import njit


@njit(cache=True)
def conv2d(x, w, b, stride=1, groups=1):
    cin, h, w_in = x.shape
    cout = w.shape[0]
    cin_g = w.shape[1]
    k = w.shape[2]
    ho = (h - k) // stride + 1
    wo = (w_in - k) // stride + 1
    cpg = cout // groups
    out = np.empty((cout, ho, wo), dtype=np.float64)
    for co in range(cout):
        g = co // cpg
        for oy in range(ho):
            for ox in range(wo):
                acc = b[co]
                for ci in range(cin_g):
                    for ky in range(k):
                        for kx in range(k):
                            acc += w[co, ci, ky, kx] * x[g * cin_g + ci, oy * stride + ky, ox * stride + kx]
                out[co, oy, ox] = acc
    return out


@njit(cache=True)
def bilinear_resize(src, out_h, out_w):
    h, w, c = src.shape
    if out_h == h and out_w == w:
        return src.copy()
    out = np.empty((out_h, out_w, c), dtype=np.float64)
    for oy in range(out_h):
        sy = (oy + 0.5) * (h / out_h) - 0.5
        if sy < 0.0:
            sy = 0.0
        if sy > h - 1.0:
            sy = h - 1.0
        y0 = int(np.floor(sy))
        wy = sy - y0
        y1 = min(y0 + 1, h - 1)
        for ox in range(out_w):
            sx = (ox + 0.5) * (w / out_w) - 0.5
            if sx < 0.0:
                sx = 0.0
            if sx > w - 1.0:
                sx = w - 1.0
            x0 = int(np.floor(sx))
            wx = sx - x0
            x1 = min(x0 + 1, w - 1)
            for ch in range(c):
                v00 = src[y0, x0, ch]
                v01 = src[y0, x1, ch]
                v10 = src[y1, x0, ch]
                v11 = src[y1, x1, ch]
                out[oy, ox, ch] = (1.0 - wy) * ((1.0 - wx) * v00 + wx * v01) + wy * (
                    (1.0 - wx) * v10 + wx * v11
                )
    return out


@njit(cache=True)
def warp_bilinear(src, flow):
    h, w, c = src.shape
    out = np.empty((h, w, c), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            sx = x + flow[y, x, 0]
            sy = y + flow[y, x, 1]
            if sx < 0.0:
                sx = 0.0
            if sx > w - 1.0:
                sx = w - 1.0
            if sy < 0.0:
                sy = 0.0
            if sy > h - 1.0:
                sy = h - 1.0
            x0 = int(np.floor(sx))
            y0 = int(np.floor(sy))
            wx = sx - x0
            wy = sy - y0
            x1 = min(x0 + 1, w - 1)
            y1 = min(y0 + 1, h - 1)
            for ch in range(c):
                v00 = src[y0, x0, ch]
                v01 = src[y0, x1, ch]
                v10 = src[y1, x0, ch]
                v11 = src[y1, x1, ch]
                out[y, x, ch] = (1.0 - wy) * ((1.0 - wx) * v00 + wx * v01) + wy * (
                    (1.0 - wx) * v10 + wx * v11
                )
    return out


@njit(cache=True)
def pow_map(img, exponents):
    out = np.empty_like(img)
    flat_img = img.ravel()
    flat_exp = exponents.ravel()
    flat_out = out.ravel()
    for i in range(flat_img.size):
        flat_out[i] = flat_img[i] ** flat_exp[i]
    return out
