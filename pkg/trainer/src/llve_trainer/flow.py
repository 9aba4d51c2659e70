"""Motion alignment for the temporal losses.

Flow is estimated on the raw input frames (no gradients needed there)
with OpenCV's dense Farneback implementation; the enhanced frame is
then warped differentiably with grid sampling, edge-clamped, matching
the inference engine's backward-warp convention:
aligned(x, y) = frame(x + dx, y + dy).
"""

import cv2
import numpy as np
import torch
import torch.nn.functional as F

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def _luma_u8(frame: torch.Tensor) -> np.ndarray:
    arr = frame.detach().cpu().numpy()
    lum = LUMA_WEIGHTS[0] * arr[0] + LUMA_WEIGHTS[1] * arr[1] + LUMA_WEIGHTS[2] * arr[2]
    return np.clip(lum * 255.0 + 0.5, 0, 255).astype(np.uint8)


def estimate_flow(frame_t: torch.Tensor, frame_t1: torch.Tensor) -> torch.Tensor:
    """Dense (H, W, 2) displacements so frame_t(x+dx, y+dy) matches frame_t1(x, y)."""
    flow = cv2.calcOpticalFlowFarneback(
        _luma_u8(frame_t1),
        _luma_u8(frame_t),
        None,
        pyr_scale=0.5,
        levels=2,
        winsize=15,
        iterations=3,
        poly_n=7,
        poly_sigma=1.5,
        flags=0,
    )
    return torch.from_numpy(np.ascontiguousarray(flow)).double()


def warp(frame: torch.Tensor, flow: torch.Tensor) -> torch.Tensor:
    """Bilinear backward warp of a (3, H, W) tensor; out-of-bounds clamps."""
    _, h, w = frame.shape
    if not flow.any():
        return frame  # exact identity, matching the engine's convention
    yy, xx = torch.meshgrid(
        torch.arange(h, dtype=torch.float64),
        torch.arange(w, dtype=torch.float64),
        indexing="ij",
    )
    sx = xx + flow[:, :, 0]
    sy = yy + flow[:, :, 1]
    # normalized grid coordinates with align_corners: -1 -> 0, 1 -> dim-1
    gx = 2.0 * sx / max(w - 1, 1) - 1.0
    gy = 2.0 * sy / max(h - 1, 1) - 1.0
    grid = torch.stack([gx, gy], dim=-1).unsqueeze(0)
    out = F.grid_sample(
        frame.unsqueeze(0), grid, mode="bilinear", padding_mode="border", align_corners=True
    )
    return out.squeeze(0)
