"""Training losses: zero-reference image losses plus temporal consistency.

The image-side losses need no ground truth: spatial consistency keeps
local contrast relative to the input, exposure control pulls pooled
brightness toward a well-exposed level, gray-world color constancy
penalizes channel-mean imbalance, and a smoothness term regularizes the
exponent map. The temporal pair evaluates exposure and color
consistency between a frame and the motion-aligned previous frame,
summed over pixels exactly as the engine's metrics define them.
"""

import torch
import torch.nn.functional as F

WELL_EXPOSED_LEVEL = 0.6
EXPOSURE_PATCH = 16
SPATIAL_PATCH = 4
COLOR_DELTA = 1e-4

# Relative weights of the image-side terms.
W_SPA = 1.0
W_EXP = 10.0
W_COL = 5.0
W_TVA = 200.0


def _gray(x: torch.Tensor) -> torch.Tensor:
    return x.mean(dim=1, keepdim=True)


def spatial_consistency(enhanced: torch.Tensor, original: torch.Tensor) -> torch.Tensor:
    """Difference of local-contrast magnitudes on 4x4 pooled intensities."""
    e = F.avg_pool2d(_gray(enhanced), SPATIAL_PATCH)
    o = F.avg_pool2d(_gray(original), SPATIAL_PATCH)
    loss = enhanced.new_zeros(())
    for dy, dx in ((0, 1), (1, 0)):
        de = e[:, :, dy:, dx:] - e[:, :, : e.shape[2] - dy, : e.shape[3] - dx]
        do = o[:, :, dy:, dx:] - o[:, :, : o.shape[2] - dy, : o.shape[3] - dx]
        loss = loss + ((de.abs() - do.abs()) ** 2).mean()
    return loss


def exposure_control(enhanced: torch.Tensor, level: float = WELL_EXPOSED_LEVEL) -> torch.Tensor:
    pooled = F.avg_pool2d(_gray(enhanced), EXPOSURE_PATCH)
    return ((pooled - level) ** 2).mean()


def color_constancy(enhanced: torch.Tensor) -> torch.Tensor:
    means = enhanced.mean(dim=(2, 3))
    r, g, b = means[:, 0], means[:, 1], means[:, 2]
    return (((r - g) ** 2) + ((r - b) ** 2) + ((g - b) ** 2)).mean()


def illumination_smoothness(gamma: torch.Tensor) -> torch.Tensor:
    dh = gamma[:, :, 1:, :] - gamma[:, :, :-1, :]
    dw = gamma[:, :, :, 1:] - gamma[:, :, :, :-1]
    return (dh ** 2).mean() + (dw ** 2).mean()


def zero_dce_losses(enhanced, original, gamma):
    """The four image-side terms as a dict of scalars."""
    return {
        "l_spa": spatial_consistency(enhanced, original),
        "l_exp": exposure_control(enhanced),
        "l_col": color_constancy(enhanced),
        "l_tva": illumination_smoothness(gamma),
    }


def zero_dce_total(enhanced, original, gamma) -> torch.Tensor:
    parts = zero_dce_losses(enhanced, original, gamma)
    return (
        W_SPA * parts["l_spa"]
        + W_EXP * parts["l_exp"]
        + W_COL * parts["l_col"]
        + W_TVA * parts["l_tva"]
    )


def exposure_consistency(e_t1: torch.Tensor, e_t_aligned: torch.Tensor) -> torch.Tensor:
    """Pixel-summed |channel-sum difference|; inputs (3, H, W) or (B, 3, H, W)."""
    s1 = e_t1.sum(dim=-3)
    s0 = e_t_aligned.sum(dim=-3)
    return (s1 - s0).abs().sum()


def color_consistency(e_t1: torch.Tensor, e_t_aligned: torch.Tensor, c: float = COLOR_DELTA) -> torch.Tensor:
    """Pixel- and channel-summed difference of delta-regularized channel ratios."""
    r1 = (e_t1 + c) / (e_t1.sum(dim=-3, keepdim=True) + c)
    r0 = (e_t_aligned + c) / (e_t_aligned.sum(dim=-3, keepdim=True) + c)
    return (r1 - r0).abs().sum()


def temporal_losses(e_t1: torch.Tensor, e_t: torch.Tensor, flow: torch.Tensor):
    """Warp the earlier enhanced frame by the flow, then evaluate both
    consistency sums. ``flow`` is (H, W, 2) pixel displacements; gradients
    flow through the frames, not the alignment."""
    from .flow import warp

    aligned = warp(e_t, flow)
    return exposure_consistency(e_t1, aligned), color_consistency(e_t1, aligned)
